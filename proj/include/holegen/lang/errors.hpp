#pragma once

#include <stdexcept>
#include <string>

#include "holegen/lang/ast.hpp"

namespace holegen::lang {

class SourceError : public std::runtime_error {
 public:
  SourceError(const std::string& what, SourceSpan span)
      : std::runtime_error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + what),
        span_(span) {}
  SourceSpan span() const { return span_; }

 private:
  SourceSpan span_;
};

class ParseError : public SourceError {
 public:
  using SourceError::SourceError;
};

class TypeError : public SourceError {
 public:
  using SourceError::SourceError;
};

}  // namespace holegen::lang
