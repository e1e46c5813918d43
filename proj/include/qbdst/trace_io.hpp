#pragma once

#include <iosfwd>

#include "qbdst/engine.hpp"

namespace qbdst {

// JSON Lines: one header record, then one record per iteration. Rationals are
// exact "p/q" strings, nodes are 1-based, arcs are 0-based ArcId indices.
void write_trace(std::ostream& out, const GrowthTrace& trace);

// Inverse of write_trace. Duals are rebuilt from the iteration records.
GrowthTrace read_trace(std::istream& in);

}  // namespace qbdst
