#pragma once

#include <string>
#include <vector>

#include "qtrees/bassserre.hpp"

namespace qtrees::fixtures {

struct Fixture {
    std::string name;
    std::string provenance;
    std::string content;
};

/** The shipped desk-scale corpus, in a fixed order. */
const std::vector<Fixture>& all();

/** Content by file name; throws when unknown. */
const std::string& content(const std::string& name);

/** Ball of the regular tree of the given vertex degree, with synthetic labels. */
bassserre::TreeBall regular_ball(int degree, int depth);

} // namespace qtrees::fixtures
