// Minimal "key = value" text format with [section] headers.  Keys and
// sections keep their source line so callers can anchor errors.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hsrsched::ini {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;
  int line = 0;
  std::vector<Entry> entries;

  const Entry* find(std::string_view key) const;
  /// Appends, or replaces the value of an existing key.
  void set(std::string key, std::string value);
};

class Document {
 public:
  /// '#' and ';' start full-line comments.  Keys before the first header
  /// land in a section named "".  Duplicate sections or keys are errors.
  static Document parse(std::string_view text, std::string source = "<input>");

  const std::string& source() const { return source_; }
  const std::vector<Section>& sections() const { return sections_; }
  const Section* find(std::string_view name) const;
  Section& section(std::string name);  // get or append

  std::string str() const;

 private:
  std::string source_ = "<input>";
  std::vector<Section> sections_;
};

}  // namespace hsrsched::ini
