#pragma once

#include <stdexcept>
#include <string>

namespace wpr {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define WPR_DEFINE_ERROR(Name)                             \
  struct Name : Error {                                    \
    explicit Name(const std::string& msg) : Error(msg) {}  \
  }

WPR_DEFINE_ERROR(InvalidParameter);
WPR_DEFINE_ERROR(BandMismatch);
WPR_DEFINE_ERROR(QuadratureTooCoarse);
WPR_DEFINE_ERROR(ProgressiveWaveletNoLimit);
WPR_DEFINE_ERROR(NoFiniteOrder);
WPR_DEFINE_ERROR(EdgeLeakage);
WPR_DEFINE_ERROR(AmbiguousSigns);
WPR_DEFINE_ERROR(TooManyIntervals);
WPR_DEFINE_ERROR(NotConverging);
WPR_DEFINE_ERROR(DCObstruction);
WPR_DEFINE_ERROR(GridMismatch);
WPR_DEFINE_ERROR(Stalled);
WPR_DEFINE_ERROR(ParseError);
WPR_DEFINE_ERROR(IoError);

#undef WPR_DEFINE_ERROR

}  // namespace wpr
