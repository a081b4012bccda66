#pragma once

#include <stdexcept>
#include <vector>

#include "ringworm/features.hpp"

namespace ringworm {

// Majority rule over exactly three binary votes.
inline int majority_vote(const std::vector<int>& votes) {
    if (votes.size() != 3) throw std::invalid_argument("majority_vote: exactly 3 votes required");
    int positive = 0;
    for (int v : votes) {
        if (v != kNegative && v != kPositive)
            throw std::invalid_argument("majority_vote: votes must be binary labels");
        positive += v == kPositive;
    }
    return positive >= 2 ? kPositive : kNegative;
}

} // namespace ringworm
