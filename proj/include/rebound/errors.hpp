#pragma once

#include <stdexcept>
#include <string>

namespace rebound {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define REBOUND_DEFINE_ERROR(Name)                                             \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string &what) : Error(#Name ": " + what) {}       \
  }

REBOUND_DEFINE_ERROR(RegisterClash);
REBOUND_DEFINE_ERROR(UnknownRegister);
REBOUND_DEFINE_ERROR(NotHermitian);
REBOUND_DEFINE_ERROR(InvalidState);
REBOUND_DEFINE_ERROR(DimensionMismatch);
REBOUND_DEFINE_ERROR(BadPartition);
REBOUND_DEFINE_ERROR(BadDistribution);
REBOUND_DEFINE_ERROR(InvalidChannel);
REBOUND_DEFINE_ERROR(InvalidCollection);
REBOUND_DEFINE_ERROR(InvalidRepresentation);
REBOUND_DEFINE_ERROR(NotCovariant);
REBOUND_DEFINE_ERROR(NotOneDesign);
REBOUND_DEFINE_ERROR(BadEpsilon);
REBOUND_DEFINE_ERROR(NotBlockDiagonal);
REBOUND_DEFINE_ERROR(BudgetExceeded);
REBOUND_DEFINE_ERROR(NotSeizable);
REBOUND_DEFINE_ERROR(CodebookMismatch);
REBOUND_DEFINE_ERROR(InvalidProtocol);
REBOUND_DEFINE_ERROR(NotParametrized);
REBOUND_DEFINE_ERROR(UnsupportedMode);

#undef REBOUND_DEFINE_ERROR

} // namespace rebound
