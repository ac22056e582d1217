#pragma once

#include "plap/grid.hpp"
#include "plap/expression.hpp"
#include "plap/nonlinearity.hpp"
#include "plap/energy.hpp"
#include "plap/descent.hpp"
#include "plap/constants.hpp"
#include "plap/regime.hpp"
#include "plap/bound.hpp"
#include "plap/solver.hpp"
#include "plap/lab.hpp"
