#pragma once

#include "animfa/analysis.hpp"
#include "animfa/connectivity.hpp"
#include "animfa/core.hpp"
#include "animfa/csv.hpp"
#include "animfa/graph.hpp"
#include "animfa/model.hpp"
#include "animfa/responses.hpp"
#include "animfa/rng.hpp"
#include "animfa/scenario.hpp"
#include "animfa/simulate.hpp"
