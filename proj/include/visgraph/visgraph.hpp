#ifndef VISGRAPH_VISGRAPH_HPP
#define VISGRAPH_VISGRAPH_HPP

#include "visgraph/dfa.hpp"
#include "visgraph/distfit.hpp"
#include "visgraph/error.hpp"
#include "visgraph/graph.hpp"
#include "visgraph/metrics.hpp"
#include "visgraph/regression.hpp"
#include "visgraph/report.hpp"
#include "visgraph/rng.hpp"
#include "visgraph/series.hpp"
#include "visgraph/synth.hpp"
#include "visgraph/visibility.hpp"

#endif  // VISGRAPH_VISGRAPH_HPP
