#ifndef FJSP_TESTS_FIXTURES_HPP
#define FJSP_TESTS_FIXTURES_HPP

#include "fjsp/genome.hpp"
#include "fjsp/instance.hpp"

#include <string_view>

namespace fjsp::support {

// Three jobs on three machines; operation rows (3, 2, 2).
inline constexpr std::string_view kExample3x3Fjs = "3 3 2.29\n"
                                               "3 2 1 3 3 2 3 1 5 2 7 3 6 1 3 2\n"
                                               "2 3 1 2 2 4 3 3 2 1 2 3 1\n"
                                               "2 3 1 4 2 2 3 2 2 1 3 2 5\n";

inline FjspInstance example3x3() { return parse_fjs(kExample3x3Fjs); }

// os 1 2 3 2 1 1 3, ma 2 1 1 3 2 2 1 (1-based) stored 0-based.
inline Chromosome worked_chromosome()
{
    return Chromosome { { 0, 1, 2, 1, 0, 0, 2 }, { 1, 0, 0, 2, 1, 1, 0 } };
}

} // namespace fjsp::support

#endif
