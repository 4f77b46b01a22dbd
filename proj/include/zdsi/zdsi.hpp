#pragma once

// Core library. The file formats and the command line (io.hpp, cli.hpp) also
// need the vendored JSON and CLI11 headers and are included separately.

#include "zdsi/codeword.hpp"
#include "zdsi/curve.hpp"
#include "zdsi/error.hpp"
#include "zdsi/examples.hpp"
#include "zdsi/graph.hpp"
#include "zdsi/lp.hpp"
#include "zdsi/multiterminal.hpp"
#include "zdsi/partition.hpp"
#include "zdsi/prob.hpp"
#include "zdsi/problem.hpp"
#include "zdsi/quantizer.hpp"
#include "zdsi/rational.hpp"
#include "zdsi/ri_codes.hpp"
#include "zdsi/seq_scheme.hpp"
#include "zdsi/stream_sim.hpp"
