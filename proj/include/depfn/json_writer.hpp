#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "depfn/csv.hpp"  // format_double
#include "depfn/estimator.hpp"

namespace depfn {

// Minimal ordered JSON emitter. Numbers are written with 17 significant
// digits so round-trips are lossless.
class JsonWriter {
public:
    explicit JsonWriter(std::ostream& out) : out_(out) {}

    JsonWriter& begin_object() {
        separate();
        out_ << '{';
        stack_.push_back(true);
        return *this;
    }
    JsonWriter& end_object() {
        out_ << '}';
        stack_.pop_back();
        return *this;
    }
    JsonWriter& begin_array() {
        separate();
        out_ << '[';
        stack_.push_back(true);
        return *this;
    }
    JsonWriter& end_array() {
        out_ << ']';
        stack_.pop_back();
        return *this;
    }

    JsonWriter& key(std::string_view k) {
        separate();
        write_string(k);
        out_ << ':';
        pending_value_ = true;
        return *this;
    }

    JsonWriter& value(double v) {
        separate();
        if (std::isfinite(v))
            out_ << format_double(v);
        else
            out_ << "null";
        return *this;
    }
    JsonWriter& value(std::string_view v) {
        separate();
        write_string(v);
        return *this;
    }
    JsonWriter& value(const char* v) { return value(std::string_view(v)); }
    JsonWriter& value(bool v) {
        separate();
        out_ << (v ? "true" : "false");
        return *this;
    }
    JsonWriter& value(std::uint64_t v) {
        separate();
        out_ << v;
        return *this;
    }
    JsonWriter& value(int v) {
        separate();
        out_ << v;
        return *this;
    }

    JsonWriter& number_array(std::span<const double> values) {
        begin_array();
        for (double v : values) value(v);
        end_array();
        return *this;
    }

private:
    void separate() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (!stack_.empty()) {
            if (!stack_.back()) out_ << ',';
            stack_.back() = false;
        }
    }

    void write_string(std::string_view s) {
        out_ << '"';
        for (char c : s) {
            switch (c) {
                case '"': out_ << "\\\""; break;
                case '\\': out_ << "\\\\"; break;
                case '\n': out_ << "\\n"; break;
                case '\r': out_ << "\\r"; break;
                case '\t': out_ << "\\t"; break;
                default:
                    if (static_cast<unsigned char>(c) < 0x20) {
                        char buf[8];
                        std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                        out_ << buf;
                    } else {
                        out_ << c;
                    }
            }
        }
        out_ << '"';
    }

    std::ostream& out_;
    std::vector<bool> stack_;  // per level: true while no element written yet
    bool pending_value_ = false;
};

inline void write_curve_json(JsonWriter& w, const DependenceCurve& c) {
    w.begin_object();
    w.key("kind").value(curve_kind_name(c.kind));
    w.key("grid").number_array(c.grid);
    w.key("values").number_array(c.values);
    w.key("source");
    w.begin_object();
    if (const auto* e = std::get_if<source::Estimated>(&c.source)) {
        w.key("type").value("estimated");
        w.key("n").value(e->n);
    } else if (std::holds_alternative<source::Analytic>(c.source)) {
        w.key("type").value("analytic");
    } else if (const auto* q = std::get_if<source::Quadrature>(&c.source)) {
        w.key("type").value("quadrature");
        w.key("tolerance").value(q->tolerance);
    } else if (const auto* m = std::get_if<source::MonteCarlo>(&c.source)) {
        w.key("type").value("monte_carlo");
        w.key("samples").value(m->samples);
        w.key("seed").value(m->seed);
    }
    w.end_object();
    w.end_object();
}

}  // namespace depfn
