#pragma once
#include <stdexcept>
#include <string>

namespace caplab {

struct PoleError : std::runtime_error { using std::runtime_error::runtime_error; };
struct DomainError : std::runtime_error { using std::runtime_error::runtime_error; };
struct SingularityError : std::runtime_error { using std::runtime_error::runtime_error; };
struct StepFailure : std::runtime_error { using std::runtime_error::runtime_error; };
struct RangeError : std::runtime_error { using std::runtime_error::runtime_error; };
struct NoContactError : std::runtime_error { using std::runtime_error::runtime_error; };
struct InconsistentContact : std::runtime_error { using std::runtime_error::runtime_error; };
struct SignMismatch : std::runtime_error { using std::runtime_error::runtime_error; };
struct DegenerateSlice : std::runtime_error { using std::runtime_error::runtime_error; };
struct ContactLost : std::runtime_error { using std::runtime_error::runtime_error; };
struct DegenerateDual : std::runtime_error { using std::runtime_error::runtime_error; };
struct UmbilicError : std::runtime_error { using std::runtime_error::runtime_error; };
struct ProjectionDegenerate : std::runtime_error { using std::runtime_error::runtime_error; };
struct AssemblyError : std::runtime_error { using std::runtime_error::runtime_error; };
struct TruncationError : std::runtime_error { using std::runtime_error::runtime_error; };

} // namespace caplab
