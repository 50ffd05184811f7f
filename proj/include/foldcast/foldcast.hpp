#pragma once

#include "foldcast/bench.hpp"
#include "foldcast/conformal.hpp"
#include "foldcast/dual.hpp"
#include "foldcast/error.hpp"
#include "foldcast/fold.hpp"
#include "foldcast/forecaster.hpp"
#include "foldcast/io/csv.hpp"
#include "foldcast/io/json.hpp"
#include "foldcast/metrics.hpp"
#include "foldcast/models/model.hpp"
#include "foldcast/models/registry.hpp"
#include "foldcast/ndarray.hpp"
#include "foldcast/optimize.hpp"
#include "foldcast/series.hpp"
#include "foldcast/synth.hpp"
#include "foldcast/timing.hpp"
