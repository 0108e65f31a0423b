#pragma once

// Umbrella header: temporal row-pattern matching over tabular traces.

#include "trex/error.hpp"
#include "trex/trace.hpp"
#include "trex/expr.hpp"
#include "trex/sere.hpp"
#include "trex/parse.hpp"
#include "trex/atoms.hpp"
#include "trex/booleanize.hpp"
#include "trex/compile.hpp"
#include "trex/oracle.hpp"
#include "trex/nfa.hpp"
#include "trex/engine.hpp"
#include "trex/report.hpp"
