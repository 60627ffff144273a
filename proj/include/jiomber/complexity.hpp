#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jiomber {

enum class Algorithm {
    FullRankLMS,
    FullRankMBER,
    MWF_LMS,
    EIG,
    JIO_LMS,
    MWF_MBER,
    JIO_MBER,
    JIO_MBER_AutoRank,
};

std::string_view to_string(Algorithm a);
Algorithm algorithm_from_string(std::string_view name);  // throws ConfigError
const std::vector<Algorithm>& all_algorithms();

/// Parameters a row may use. Unset fields are reported as 0 in CSV output.
struct OpCountParams {
    std::optional<std::int64_t> M, D, J, Lp, D_max;
};

struct OpCountReport {
    Algorithm algorithm;
    std::int64_t multiplications = 0;
    std::int64_t additions = 0;
    OpCountParams params;
    bool asymptotic = false;  // EIG: M^3 stands in for O(M^3)
};

/// Per-symbol multiplications and additions of one receiver. Throws
/// ConfigError when a parameter the row needs is missing or not positive.
OpCountReport op_count(Algorithm algorithm, const OpCountParams& params);

struct ComplexityGrid {
    std::vector<std::int64_t> M, D, J, Lp, D_max;
};

/// Cross product of the grid for every algorithm (algorithm-major order).
std::vector<OpCountReport> complexity_sweep(const std::vector<Algorithm>& algorithms,
                                            const ComplexityGrid& grid);

/// CSV with header algorithm,M,D,J,Lp,Dmax,mults,adds.
void write_complexity_csv(std::ostream& out, const std::vector<OpCountReport>& rows);

}  // namespace jiomber
