// Error types shared across the library. Each maps to a named failure mode
// of a public operation; recoverable conditions are flags, not exceptions.
#pragma once

#include <stdexcept>
#include <string>

namespace negsim {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// personality
struct InsufficientAdjectives : Error { using Error::Error; };
struct EmptyAdjectiveList : Error { using Error::Error; };

// scenario
struct InvalidPriceOrder : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };

// metrics
struct DegenerateInterval : Error { using Error::Error; };
struct EmptyCorpus : Error { using Error::Error; };
struct NoSuccesses : Error { using Error::Error; };

// stats
struct LengthMismatch : Error { using Error::Error; };
struct ConstantSeries : Error { using Error::Error; };
struct ZeroMarginal : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };

// agents / backends
struct BackendUnavailable : Error { using Error::Error; };
struct BackendRefusal : Error { using Error::Error; };

// ipip
struct UnparseableReply : Error { using Error::Error; };
struct MissingItems : Error { using Error::Error; };

// runner
struct ConfigError : Error { using Error::Error; };

}  // namespace negsim
