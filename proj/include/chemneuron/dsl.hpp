#pragma once

#include <string>
#include <string_view>

#include "chemneuron/network.hpp"

namespace chemneuron {

/// Parses the .crn text format:
///
///   # comment
///   species NAME [= COUNT]
///   let NAME = VALUE
///   A + B -> C @ 0.5        # unidirectional, rate inline or a let name
///   A <-> B @ kf, kr        # expands to two unidirectional reactions
///   H1 -> @ 0.0003          # empty side is the sink/source
///
/// Identifiers are [A-Za-z][A-Za-z0-9_]*; non-ASCII input is rejected.
/// Species used in a reaction without a declaration are created with
/// initial count 0. Throws ParseError with 1-based line/column.
NetworkSpec parse_network(std::string_view text);

/// Canonical document: every species as an explicit declaration in id
/// order, then each reaction unidirectionally in declaration order with
/// its rate inlined (shortest round-trip formatting). parse(print(s))
/// reproduces s. Hill-modulated reactions have no text form and raise
/// ConfigError.
std::string print_network(const NetworkSpec& network);

}  // namespace chemneuron
