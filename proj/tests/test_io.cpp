#include <catch2/catch_amalgamated.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "depfn/analyze.hpp"
#include "depfn/copulas.hpp"
#include "depfn/csv.hpp"
#include "depfn/json_writer.hpp"

using namespace depfn;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("depfn_test_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) const {
        const auto p = path / name;
        std::ofstream out(p);
        out << content;
        return p.string();
    }
};

}  // namespace

TEST_CASE("load_csv reads selected columns by name") {
    TempDir dir;
    const auto path = dir.file("basic.csv", "a,y,x\n9,1.5,0.25\n9,2.5,0.5\n9,3.5,0.75\n");
    const CsvLoadResult r = load_csv(path, "y", {"x"});
    CHECK(r.data.n() == 3);
    CHECK(r.data.d == 1);
    CHECK(r.data.y == std::vector<double>{1.5, 2.5, 3.5});
    CHECK(r.data.x == std::vector<double>{0.25, 0.5, 0.75});
    CHECK(r.skipped_rows.empty());
}

TEST_CASE("load_csv skips malformed rows and reports their numbers") {
    TempDir dir;
    const auto path = dir.file("bad_row.csv", "y,x\n1,0.1\nnot_a_number,0.2\n3,0.3\n");
    const CsvLoadResult r = load_csv(path, "y", {"x"});
    CHECK(r.data.n() == 2);
    REQUIRE(r.skipped_rows == std::vector<std::size_t>{2});
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0].find("row 2") != std::string::npos);
}

TEST_CASE("load_csv handles quotes, CRLF and a BOM") {
    TempDir dir;
    const auto path =
        dir.file("quoted.csv", "\xEF\xBB\xBF\"y\",\"x one\"\r\n\"1.5\",\"2.5\"\r\n2.5,3.5\r\n");
    const CsvLoadResult r = load_csv(path, "y", {"x one"});
    CHECK(r.data.y == std::vector<double>{1.5, 2.5});
    CHECK(r.data.x == std::vector<double>{2.5, 3.5});
}

TEST_CASE("load_csv multi-column selection preserves order") {
    TempDir dir;
    const auto path = dir.file("multi.csv", "x2,y,x1\n10,1,20\n11,2,21\n");
    const CsvLoadResult r = load_csv(path, "y", {"x1", "x2"});
    CHECK(r.data.d == 2);
    CHECK(r.data.x == std::vector<double>{20, 10, 21, 11});
}

TEST_CASE("load_csv error paths") {
    TempDir dir;
    CHECK_THROWS_AS(load_csv((dir.path / "missing.csv").string(), "y", {"x"}), io_error);
    const auto path = dir.file("cols.csv", "y,x\n1,2\n3,4\n");
    CHECK_THROWS_AS(load_csv(path, "z", {"x"}), io_error);
    CHECK_THROWS_AS(load_csv(path, "y", {"q"}), io_error);
    const auto empty = dir.file("empty.csv", "y,x\n");
    CHECK_THROWS_AS(load_csv(empty, "y", {"x"}), io_error);
    const auto all_bad = dir.file("all_bad.csv", "y,x\na,b\nc,d\n");
    CHECK_THROWS_AS(load_csv(all_bad, "y", {"x"}), io_error);
    const auto one_row = dir.file("one.csv", "y,x\n1,2\n");
    CHECK_THROWS_AS(load_csv(one_row, "y", {"x"}), io_error);
}

TEST_CASE("format_double round-trips doubles exactly") {
    std::mt19937_64 gen(321);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double v = unif(gen);
        const std::string s = format_double(v);
        double back = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), back);
        REQUIRE(ec == std::errc{});
        REQUIRE(back == v);
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("CSV round trip reproduces the in-memory analysis exactly") {
    TempDir dir;
    const Dataset data = sample_joint(FrechetSpec{0.3, 0.4}, 200, 2025);
    const auto path = (dir.path / "sample.csv").string();
    {
        std::ofstream out(path);
        write_dataset_csv(out, data);
    }
    const CsvLoadResult loaded = load_csv(path, "y", {"x1"});
    REQUIRE(loaded.data.n() == data.n());
    CHECK(loaded.data.y == data.y);
    CHECK(loaded.data.x == data.x);

    const AnalysisReport direct = analyze(data);
    const AnalysisReport via_csv = analyze(loaded.data);
    CHECK(direct.xi == via_csv.xi);
    CHECK(direct.phi_at_bn == via_csv.phi_at_bn);
    CHECK(direct.phi.values == via_csv.phi.values);
    CHECK(direct.kappa.values == via_csv.kappa.values);
}

TEST_CASE("dataset CSV writer emits y,x1..xd header") {
    const Dataset data = sample_joint(GaussianEquiSpec{0.5, 3}, 5, 1);
    std::ostringstream out;
    write_dataset_csv(out, data);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "y,x1,x2,x3");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 5);
}

TEST_CASE("study CSV uses the long format") {
    StudyConfig cfg;
    cfg.spec = IndependenceSpec{};
    cfg.sample_sizes = {10, 20};
    cfg.repetitions = 3;
    cfg.grid = uniform_grid(11);
    cfg.master_seed = 5;
    const StudyResult result = run_study(cfg);
    std::ostringstream out;
    write_study_csv(out, result);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "kind,n,rep,deviation");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 2 * 2 * 3);  // kinds x sizes x reps
}

TEST_CASE("JSON writer emits ordered lossless documents") {
    std::ostringstream out;
    JsonWriter w(out);
    w.begin_object();
    w.key("name").value("a\"b");
    w.key("count").value(std::uint64_t{3});
    w.key("ok").value(true);
    w.key("xs");
    w.number_array(std::vector<double>{0.5, 0.25});
    w.key("nested");
    w.begin_object();
    w.key("v").value(0.1);
    w.end_object();
    w.end_object();
    CHECK(out.str() ==
          "{\"name\":\"a\\\"b\",\"count\":3,\"ok\":true,\"xs\":[0.5,0.25],"
          "\"nested\":{\"v\":0.10000000000000001}}");
}

TEST_CASE("curve JSON carries the source metadata") {
    NormalizedGaps g{2, {1.0 / 3.0, 1.0 / 3.0}};
    const auto grid = uniform_grid(3);
    std::ostringstream out;
    JsonWriter w(out);
    write_curve_json(w, phi_curve(g, grid));
    CHECK(out.str().find("\"kind\":\"phi\"") != std::string::npos);
    CHECK(out.str().find("\"type\":\"estimated\"") != std::string::npos);
    CHECK(out.str().find("\"n\":2") != std::string::npos);
}
