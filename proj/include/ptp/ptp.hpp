#pragma once

#include "ptp/calibration.hpp"
#include "ptp/cell.hpp"
#include "ptp/episode.hpp"
#include "ptp/frontier.hpp"
#include "ptp/grid.hpp"
#include "ptp/harness.hpp"
#include "ptp/metrics.hpp"
#include "ptp/planner.hpp"
#include "ptp/pruning.hpp"
#include "ptp/rng.hpp"
#include "ptp/scene.hpp"
#include "ptp/scorer.hpp"
#include "ptp/selection.hpp"
#include "ptp/sensor.hpp"
