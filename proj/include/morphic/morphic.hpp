#pragma once

#include "morphic/analysis.hpp"
#include "morphic/balance.hpp"
#include "morphic/certified.hpp"
#include "morphic/core.hpp"
#include "morphic/decide.hpp"
#include "morphic/engine.hpp"
#include "morphic/errors.hpp"
#include "morphic/oracle.hpp"
