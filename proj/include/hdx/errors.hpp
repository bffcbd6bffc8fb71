#ifndef HDX_ERRORS_HPP
#define HDX_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hdx {

// Base class for all construction / precondition failures.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegreeOutOfRange : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct SizeMismatch : Error { using Error::Error; };
struct LevelOutOfRange : Error { using Error::Error; };

struct CommutationViolation : Error {
    int dir_a, dir_b, gen_a, gen_b;
    unsigned long g;
    CommutationViolation(int ja, int jb, int a, int b, unsigned long gg)
        : Error("permutations in directions " + std::to_string(ja) + " and " + std::to_string(jb) +
                " do not commute (generators " + std::to_string(a) + "," + std::to_string(b) +
                " at element " + std::to_string(gg) + ")"),
          dir_a(ja), dir_b(jb), gen_a(a), gen_b(b), g(gg) {}
};

struct NotInverseClosed : Error {
    int dir, gen;
    NotInverseClosed(int j, int a)
        : Error("permutation set for direction " + std::to_string(j) +
                " is not closed under inverse (generator " + std::to_string(a) + ")"),
          dir(j), gen(a) {}
};

struct DuplicateGenerator : Error { using Error::Error; };
struct NotRegular : Error { using Error::Error; };
struct BadBaseGraph : Error { using Error::Error; };
struct LiftAssignmentMismatch : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct NotCovering : Error { using Error::Error; };
struct ShapeMismatch : Error { using Error::Error; };
struct NotACocycle : Error { using Error::Error; };
struct InconsistentViews : Error { using Error::Error; };
struct BudgetExceeded : Error { using Error::Error; };
struct NoFullRankTuple : Error { using Error::Error; };
struct IoFailure : Error { using Error::Error; };
struct ManifestError : Error { using Error::Error; };

} // namespace hdx

#endif
