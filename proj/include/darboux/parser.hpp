#pragma once

#include "darboux/system.hpp"

#include <map>
#include <string>
#include <string_view>

namespace darboux {

/// Syntax or semantic error in an expression, with the byte offset where it was detected.
class ParseError : public Error {
  public:
    ParseError(const std::string &msg, size_t offset, const std::string &context = "");
    size_t offset() const { return offset_; }
    const std::string &message() const { return msg_; }

  private:
    std::string msg_;
    size_t offset_;
};

/// Parses a polynomial in x, y over Q(i). Operators + - * / ^ and parentheses;
/// division only by nonzero constants, exponents are nonnegative integers.
BivarPoly parse_polynomial(std::string_view text);

/// Raw system file contents.
struct SystemSpec {
    std::string P_text;
    std::string Q_text;
    std::map<std::string, std::string> options;
};

/// Reads lines "dx = ...", "dy = ...", "option.<name> = <value>"; '#' starts a comment.
SystemSpec parse_system_file(std::string_view text);
SystemSpec load_system_file(const std::string &path);

PlanarSystem parse_system(const SystemSpec &spec);

} // namespace darboux
