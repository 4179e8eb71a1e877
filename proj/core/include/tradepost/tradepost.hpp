#pragma once

#include "tradepost/analysis.hpp"
#include "tradepost/dynamics.hpp"
#include "tradepost/economy.hpp"
#include "tradepost/equilibrium.hpp"
#include "tradepost/errors.hpp"
#include "tradepost/lyapunov.hpp"
#include "tradepost/matrix.hpp"
#include "tradepost/random.hpp"
#include "tradepost/trajectory.hpp"
#include "tradepost/union_find.hpp"
