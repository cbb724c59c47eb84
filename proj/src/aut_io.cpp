#include "refinekit/aut_io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace refinekit {

namespace {

std::string err_prefix(std::size_t line) {
  return "line " + std::to_string(line) + ": ";
}

// Cursor over one line of input.
struct Scanner {
  const std::string& text;
  std::size_t pos = 0;
  std::size_t line;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }

  void expect(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c) {
      throw ParseError(line, std::string("expected '") + c + "'");
    }
    ++pos;
  }

  std::uint64_t number() {
    skip_ws();
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
      throw ParseError(line, "expected a number");
    }
    std::uint64_t value = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      value = value * 10 + static_cast<std::uint64_t>(text[pos] - '0');
      ++pos;
    }
    return value;
  }

  // A label is either quoted or runs up to the next comma at depth 0.
  std::string label() {
    skip_ws();
    if (pos < text.size() && text[pos] == '"') {
      ++pos;
      std::string out;
      while (pos < text.size() && text[pos] != '"') {
        out += text[pos++];
      }
      if (pos >= text.size()) {
        throw ParseError(line, "unterminated label quote");
      }
      ++pos;
      return out;
    }
    std::string out;
    while (pos < text.size() && text[pos] != ',') {
      out += text[pos++];
    }
    // trim trailing whitespace
    while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) {
      out.pop_back();
    }
    if (out.empty()) {
      throw ParseError(line, "empty label");
    }
    return out;
  }

  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }
};

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(err_prefix(line) + what), line_(line) {}

Lts parse_aut(std::istream& input, const std::shared_ptr<LabelTable>& labels) {
  std::string line;
  std::size_t line_no = 0;

  // Header: des (<initial>,<num_transitions>,<num_states>)
  do {
    if (!std::getline(input, line)) {
      throw ParseError(1, "missing 'des' header");
    }
    ++line_no;
  } while (line.find_first_not_of(" \t\r\n") == std::string::npos);

  Scanner header{line, 0, line_no};
  header.skip_ws();
  if (header.text.compare(header.pos, 3, "des") != 0) {
    throw ParseError(line_no, "malformed header, expected 'des (...)'");
  }
  header.pos += 3;
  header.expect('(');
  std::uint64_t initial = header.number();
  header.expect(',');
  std::uint64_t declared_transitions = header.number();
  header.expect(',');
  std::uint64_t num_states = header.number();
  header.expect(')');

  if (num_states == 0) {
    throw ParseError(line_no, "an LTS needs at least one state");
  }
  if (initial >= num_states) {
    throw ParseError(line_no, "initial state out of range");
  }

  Lts lts;
  lts.num_states = static_cast<StateIndex>(num_states);
  lts.initial = static_cast<StateIndex>(initial);
  lts.labels = labels;
  lts.out.resize(num_states);

  std::size_t seen_transitions = 0;
  while (std::getline(input, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) {
      continue;
    }
    Scanner scan{line, 0, line_no};
    scan.expect('(');
    std::uint64_t from = scan.number();
    scan.expect(',');
    std::string label = scan.label();
    scan.expect(',');
    std::uint64_t to = scan.number();
    scan.expect(')');
    if (!scan.at_end()) {
      throw ParseError(line_no, "trailing characters after transition");
    }
    if (from >= num_states || to >= num_states) {
      throw ParseError(line_no, "state index out of range");
    }
    lts.out[from].push_back(
        {labels->intern(label), static_cast<StateIndex>(to)});
    ++seen_transitions;
  }

  if (seen_transitions != declared_transitions) {
    throw ParseError(line_no == 0 ? 1 : line_no,
                     "transition count mismatch: header declares " +
                         std::to_string(declared_transitions) + ", found " +
                         std::to_string(seen_transitions));
  }
  return lts;
}

Lts parse_aut(const std::string& text, const std::shared_ptr<LabelTable>& labels) {
  std::istringstream stream(text);
  return parse_aut(stream, labels);
}

Lts load_aut(const std::string& path, const std::shared_ptr<LabelTable>& labels) {
  std::ifstream file(path);
  if (!file) {
    throw std::runtime_error("cannot open '" + path + "'");
  }
  return parse_aut(file, labels);
}

void write_aut(std::ostream& output, const Lts& lts) {
  output << "des (" << lts.initial << "," << lts.num_transitions() << ","
         << lts.num_states << ")\n";
  for (StateIndex s = 0; s < lts.num_states; ++s) {
    for (const Transition& t : lts.out[s]) {
      output << "(" << s << ",\"" << lts.labels->name(t.action) << "\"," << t.target
             << ")\n";
    }
  }
}

std::string write_aut(const Lts& lts) {
  std::ostringstream stream;
  write_aut(stream, lts);
  return stream.str();
}

}  // namespace refinekit
