#pragma once

#include "randopt/arc.hpp"
#include "randopt/config.hpp"
#include "randopt/cubic_solver.hpp"
#include "randopt/diagnostics.hpp"
#include "randopt/experiment.hpp"
#include "randopt/linesearch.hpp"
#include "randopt/oracles.hpp"
#include "randopt/problems.hpp"
#include "randopt/rng.hpp"
#include "randopt/scaling.hpp"
#include "randopt/theory.hpp"
#include "randopt/trace.hpp"
#include "randopt/types.hpp"
