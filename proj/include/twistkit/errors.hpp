#pragma once

#include <stdexcept>
#include <string>

namespace twistkit {

// Base of everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// diagram parsing / validation
struct MalformedSyntax : Error { using Error::Error; };
struct ArcIncidenceError : Error { using Error::Error; };
struct NonPlanarError : Error { using Error::Error; };
struct SplitDiagramError : Error { using Error::Error; };
struct ComponentCoverageError : Error { using Error::Error; };
struct UnknownComponent : Error { using Error::Error; };

// twist-region selection
struct ExhaustiveTooLarge : Error { using Error::Error; };
struct EmptySelection : Error { using Error::Error; };

// augmentation / filling / reduction
struct UnknownCircleId : Error { using Error::Error; };
struct MoveNotApplicable : Error { using Error::Error; };

// bounds
struct NegativeCount : Error { using Error::Error; };
struct RetentionUndefined : Error { using Error::Error; };
struct InsufficientTwisting : Error { using Error::Error; };

}  // namespace twistkit
