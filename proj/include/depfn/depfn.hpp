#pragma once

#include "depfn/analyze.hpp"
#include "depfn/copulas.hpp"
#include "depfn/core.hpp"
#include "depfn/csv.hpp"
#include "depfn/estimator.hpp"
#include "depfn/json_writer.hpp"
#include "depfn/kdtree.hpp"
#include "depfn/normal.hpp"
#include "depfn/quadrature.hpp"
#include "depfn/ranks.hpp"
#include "depfn/reference.hpp"
#include "depfn/rng.hpp"
#include "depfn/study.hpp"

//! depfn: dependence functions phi and kappa from nearest-neighbor ranks,
//! copula sampling with analytic Markov products, and the convergence study
//! harness around them.
namespace depfn {}
