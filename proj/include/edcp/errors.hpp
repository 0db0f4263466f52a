#pragma once

#include <stdexcept>
#include <string>

namespace edcp {

// Error taxonomy shared by all modules. Everything derives from Error so
// callers can catch the library as a whole.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class PrimeBoundExceeded : public Error {
  public:
    using Error::Error;
};
class NonCoprimeModuli : public Error {
  public:
    using Error::Error;
};
class InconsistentSystem : public Error {
  public:
    using Error::Error;
};
class DimensionCap : public Error {
  public:
    using Error::Error;
};
class SpaceMismatch : public Error {
  public:
    using Error::Error;
};
class BadDistribution : public Error {
  public:
    using Error::Error;
};
class ZeroProbabilityBranch : public Error {
  public:
    using Error::Error;
};
class WeightExceedsAmplitude : public Error {
  public:
    using Error::Error;
};
class StateAlreadyConsumed : public Error {
  public:
    using Error::Error;
};
class IncompatiblePhaseModulus : public Error {
  public:
    using Error::Error;
};
class BadParams : public Error {
  public:
    using Error::Error;
};
class ParamMismatch : public Error {
  public:
    using Error::Error;
};
class LevelOverflow : public Error {
  public:
    using Error::Error;
};
class NoGapFound : public Error {
  public:
    using Error::Error;
};
class SampleBudgetExhausted : public Error {
  public:
    using Error::Error;
};
class ReductionFailed : public Error {
  public:
    using Error::Error;
};
class PoolExhausted : public Error {
  public:
    using Error::Error;
};
class IoError : public Error {
  public:
    using Error::Error;
};
class SchemaMismatch : public Error {
  public:
    using Error::Error;
};

}  // namespace edcp
