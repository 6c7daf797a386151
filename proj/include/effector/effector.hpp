#pragma once

#include "effector/baselines.hpp"
#include "effector/common.hpp"
#include "effector/diffusion.hpp"
#include "effector/fbed.hpp"
#include "effector/graph.hpp"
#include "effector/harness.hpp"
#include "effector/influence_distance.hpp"
#include "effector/matching.hpp"
#include "effector/mbed.hpp"
#include "effector/mincut.hpp"
#include "effector/mlbed.hpp"
