#include "test_support.hpp"

namespace testsupport {

// Oracle position fixtures, frozen as exact literals so the enumerated
// conditional probabilities reproduce byte-for-byte across runs.

std::vector<congen::Point> fixture4() {
    return {
        {0.49465634357994026, 0.45762799598034343},
        {0.99736354578703534, 0.51669259104182652},
        {0.24405584322767526, 0.60324673807122908},
        {0.83363439420325203, 0.47870784509617847},
    };
}

std::vector<congen::Point> fixture5() {
    return {
        {0.43511398713262861, 0.87829222703669108},
        {0.20091332391436323, 0.83012210095697736},
        {0.11198461926403391, 0.058038616594720205},
        {0.83017151013570412, 0.87522988853071293},
        {0.63663901848257332, 0.89472403517054877},
    };
}

}  // namespace testsupport
