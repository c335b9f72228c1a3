#include "hsrsched/ini.hpp"

#include <algorithm>
#include <cctype>

namespace hsrsched::ini {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool valid_name(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

}  // namespace

ParseError::ParseError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

const Entry* Section::find(std::string_view key) const {
  for (const auto& e : entries) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

void Section::set(std::string key, std::string value) {
  for (auto& e : entries) {
    if (e.key == key) {
      e.value = std::move(value);
      return;
    }
  }
  entries.push_back(Entry{std::move(key), std::move(value), 0});
}

const Section* Document::find(std::string_view name) const {
  for (const auto& s : sections_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

Section& Document::section(std::string name) {
  for (auto& s : sections_) {
    if (s.name == name) return s;
  }
  sections_.push_back(Section{std::move(name), 0, {}});
  return sections_.back();
}

Document Document::parse(std::string_view text, std::string source) {
  Document doc;
  doc.source_ = std::move(source);
  bool in_section = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(doc.source_, line_no, "unterminated section header");
      const auto name = trim(line.substr(1, line.size() - 2));
      if (!valid_name(name)) throw ParseError(doc.source_, line_no, "bad section name");
      if (doc.find(name)) {
        throw ParseError(doc.source_, line_no, "duplicate section [" + std::string(name) + "]");
      }
      doc.sections_.push_back(Section{std::string(name), line_no, {}});
      in_section = true;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(doc.source_, line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (!valid_name(key)) throw ParseError(doc.source_, line_no, "bad key name");
    if (!in_section) {
      doc.sections_.push_back(Section{"", line_no, {}});
      in_section = true;
    }
    Section& current = doc.sections_.back();
    if (current.find(key)) {
      throw ParseError(doc.source_, line_no, "duplicate key '" + std::string(key) + "'");
    }
    current.entries.push_back(Entry{std::string(key), std::string(value), line_no});
  }
  return doc;
}

std::string Document::str() const {
  std::string out;
  bool first = true;
  for (const auto& s : sections_) {
    if (!first) out += '\n';
    first = false;
    if (!s.name.empty()) out += '[' + s.name + "]\n";
    for (const auto& e : s.entries) out += e.key + " = " + e.value + '\n';
  }
  return out;
}

}  // namespace hsrsched::ini
