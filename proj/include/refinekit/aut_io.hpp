#pragma once

#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>

#include "refinekit/lts.hpp"

namespace refinekit {

/// Raised on malformed `.aut` input; the message names the offending
/// line number.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what);

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Parses the Aldebaran format:
///
///   des (<initial>,<num_transitions>,<num_states>)
///   (<from>,"<label>",<to>)
///   (<from>,<label>,<to>)
///
/// Labels matching the table's tau name (or "i") become the internal
/// action. The table is extended in place, so parsing both sides of a
/// check against one shared table yields a common alphabet.
Lts parse_aut(std::istream& input, const std::shared_ptr<LabelTable>& labels);
Lts parse_aut(const std::string& text, const std::shared_ptr<LabelTable>& labels);

/// Convenience: parse a file from disk.
Lts load_aut(const std::string& path, const std::shared_ptr<LabelTable>& labels);

/// Writes the LTS back out; parse_aut(write_aut(l)) reproduces l.
void write_aut(std::ostream& output, const Lts& lts);
std::string write_aut(const Lts& lts);

}  // namespace refinekit
