#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "qset/algebra.hpp"

namespace qset::cli {

enum class Mode { eval, repl, audit, laws };
enum class Format { text, json };

inline constexpr Count kMaxCapPower = 24;
inline constexpr Count kMaxCapProduct = Count{1} << 20;

struct RunConfig {
  Mode mode = Mode::eval;
  std::string input_path;  // eval/audit; "-" reads the input stream
  Count samples = 500;
  std::uint64_t seed = 0;
  Format format = Format::text;
  Limits caps;
  std::size_t depth = 1;
  bool color = false;
  bool interactive = false;  // repl prompt
};

enum ExitCode : int { kOk = 0, kChecksFailed = 1, kError = 2 };

/// Runs one invocation. Results go to `out`, diagnostics to `err`; in json
/// mode `out` only ever receives a single JSON document.
int run(const RunConfig& config, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace qset::cli
