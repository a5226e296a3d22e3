#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qset {

enum class Errc {
  cap_exceeded,
  not_in_universe,
  non_classical_index,
  invalid_permutation,
  invalid_argument,
  not_composable,
  not_a_quasi_function,
  empty_universe,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::not_in_universe: return "NotInUniverse";
    case Errc::non_classical_index: return "NonClassicalIndex";
    case Errc::invalid_permutation: return "InvalidPermutation";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::not_composable: return "NotComposable";
    case Errc::not_a_quasi_function: return "NotAQuasiFunction";
    case Errc::empty_universe: return "EmptyUniverse";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace qset
