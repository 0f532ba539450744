#pragma once

// Umbrella header for the deon toolkit: regular deontologies over
// interleaved action/percept histories, static analysis, runtime governance,
// and finite-state policy verification.

#include "deon/agents.hpp"
#include "deon/alphabet.hpp"
#include "deon/analyzer.hpp"
#include "deon/automaton.hpp"
#include "deon/error.hpp"
#include "deon/governor.hpp"
#include "deon/history.hpp"
#include "deon/homunculus.hpp"
#include "deon/protocol.hpp"
#include "deon/regex.hpp"
#include "deon/rng.hpp"
#include "deon/simulate.hpp"
#include "deon/spec.hpp"
#include "deon/transducer.hpp"
