#pragma once

// Umbrella header.

#include "qse/ast.hpp"
#include "qse/parser.hpp"
#include "qse/circuit.hpp"
#include "qse/statevector.hpp"
#include "qse/arith.hpp"
#include "qse/synth.hpp"
#include "qse/partition.hpp"
#include "qse/oracle.hpp"
#include "qse/corpus.hpp"
