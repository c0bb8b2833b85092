#pragma once

// Umbrella header. Pull in everything; individual headers are also safe to
// include directly.

#include "resonator/analysis.hpp"
#include "resonator/cutoff.hpp"
#include "resonator/dd.hpp"
#include "resonator/errors.hpp"
#include "resonator/expr.hpp"
#include "resonator/format.hpp"
#include "resonator/ingest.hpp"
#include "resonator/oscillatory.hpp"
#include "resonator/parallel.hpp"
#include "resonator/quadrature.hpp"
#include "resonator/resonance.hpp"
#include "resonator/version.hpp"
#include "resonator/voronoi.hpp"
