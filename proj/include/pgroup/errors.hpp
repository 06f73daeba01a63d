#pragma once

#include <stdexcept>
#include <string>

namespace pgroup {

  // Base class for every error raised by the library.
  class error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // A presentation violates the pc support invariant or is otherwise
  // malformed (wrong vector length, bad generator index, ...).
  class structural_error : public error {
   public:
    using error::error;
  };

  // An operation was called outside of its documented domain.
  class precondition_error : public error {
   public:
    using error::error;
  };

  // Text input (presentation file, group spec, parameter tuple) could not be
  // parsed.
  class parse_error : public error {
   public:
    using error::error;
  };

  // A bounded search ran out of nodes before reaching a verdict.
  class budget_exceeded : public error {
   public:
    using error::error;
  };

  // The classifier found a count or verdict that contradicts the closed forms.
  class classification_error : public error {
   public:
    using error::error;
  };

}  // namespace pgroup
