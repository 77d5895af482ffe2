#pragma once

#include <stdexcept>
#include <string>

namespace qfaeq {

// Base for every error raised by the library. Callers that only care about
// "bad input" can catch this one.
struct Error : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error
{
  using Error::Error;
};

// A word contains a letter outside the automaton's alphabet, or an automaton
// is missing a transition the semantics needs.
struct InputError : Error
{
  using Error::Error;
};

// A span basis grew past its dimension cap. Signals a rank tolerance that is
// too tight for double arithmetic; results computed so far are not trustworthy.
struct CapViolation : Error
{
  using Error::Error;
};

} // namespace qfaeq
