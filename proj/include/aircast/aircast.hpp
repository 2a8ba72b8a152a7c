#pragma once

// Umbrella header for the whole toolkit.

#include "aircast/anfis.hpp"
#include "aircast/ann.hpp"
#include "aircast/dataset.hpp"
#include "aircast/errors.hpp"
#include "aircast/ga.hpp"
#include "aircast/linalg.hpp"
#include "aircast/mlr.hpp"
#include "aircast/pipeline.hpp"
#include "aircast/regressor.hpp"
#include "aircast/report.hpp"
#include "aircast/rng.hpp"
#include "aircast/rtree.hpp"
#include "aircast/scaler.hpp"
#include "aircast/split.hpp"
#include "aircast/stats.hpp"
#include "aircast/svr.hpp"
#include "aircast/synthetic.hpp"
