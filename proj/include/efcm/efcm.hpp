#pragma once

#include "efcm/baselines.hpp"
#include "efcm/csv.hpp"
#include "efcm/energy.hpp"
#include "efcm/engine.hpp"
#include "efcm/geometry.hpp"
#include "efcm/model.hpp"
#include "efcm/protocol.hpp"
#include "efcm/rng.hpp"
#include "efcm/scenario.hpp"
#include "efcm/xmeans.hpp"
