#pragma once

#include "hdq/arena.hpp"
#include "hdq/automaton.hpp"
#include "hdq/deciders.hpp"
#include "hdq/error.hpp"
#include "hdq/evaluate.hpp"
#include "hdq/export.hpp"
#include "hdq/format.hpp"
#include "hdq/oracle.hpp"
#include "hdq/rational.hpp"
#include "hdq/solve.hpp"
#include "hdq/token_games.hpp"
