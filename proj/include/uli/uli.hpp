#pragma once

#include "uli/combinatorics.hpp"
#include "uli/decompose.hpp"
#include "uli/error.hpp"
#include "uli/formula.hpp"
#include "uli/invariance.hpp"
#include "uli/io.hpp"
#include "uli/linear.hpp"
#include "uli/logic.hpp"
#include "uli/lp.hpp"
#include "uli/nabla.hpp"
#include "uli/principles.hpp"
#include "uli/probability.hpp"
#include "uli/rational.hpp"
