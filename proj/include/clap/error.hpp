#pragma once

#include <stdexcept>
#include <string>

namespace clap {

// Base of every error raised by the library. Each subclass names one failure
// mode so callers can catch the ones they know how to recover from.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define CLAP_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                   \
    public:                                                       \
        explicit Name(const std::string& what) : Error(what) {}   \
    }

CLAP_DEFINE_ERROR(InvalidArgument);
CLAP_DEFINE_ERROR(LogDomainError);
CLAP_DEFINE_ERROR(DegenerateHomography);
CLAP_DEFINE_ERROR(DegenerateConfiguration);
CLAP_DEFINE_ERROR(DegenerateRotationMean);
CLAP_DEFINE_ERROR(EmptyPointSet);
CLAP_DEFINE_ERROR(TooFewObservations);
CLAP_DEFINE_ERROR(AllCandidatesDegenerate);
CLAP_DEFINE_ERROR(InsufficientValidCandidates);
CLAP_DEFINE_ERROR(EmptyAfterFilter);
CLAP_DEFINE_ERROR(NoValidHypothesis);
CLAP_DEFINE_ERROR(DimensionMismatch);
CLAP_DEFINE_ERROR(FormatError);

#undef CLAP_DEFINE_ERROR

}  // namespace clap
