#pragma once

#include <stdexcept>
#include <string>

namespace qism {

/// Base class for every failure raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define QISM_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                   \
    public:                                                       \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

QISM_DEFINE_ERROR(NonConvergence);
QISM_DEFINE_ERROR(IllConditionedSamples);
QISM_DEFINE_ERROR(BadPrefix);
QISM_DEFINE_ERROR(SizeMismatch);
QISM_DEFINE_ERROR(SizeLimit);
QISM_DEFINE_ERROR(DegenerateNodes);
QISM_DEFINE_ERROR(PoleHit);
QISM_DEFINE_ERROR(NoSolutionFound);
QISM_DEFINE_ERROR(ZeroVector);
QISM_DEFINE_ERROR(SingularTransfer);
QISM_DEFINE_ERROR(InvalidArgument);

#undef QISM_DEFINE_ERROR

}  // namespace qism
