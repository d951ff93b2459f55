#pragma once

#include <string>

#include "mmcheck/mmcheck.hpp"

namespace mmcheck::fixtures {

inline const std::string kStoreBuffering =
    "init: x=0 y=0\n"
    "thread T0\n  wr x 1\n  rd y 0\n"
    "thread T1\n  wr y 1\n  rd x 0\n";

inline const std::string kMessagePassing =
    "init: x=0 y=0\n"
    "thread T0\n  wr x 1\n  wr y 1\n"
    "thread T1\n  rd y 1\n  rd x 0\n";

// Load buffering where each write depends on the read before it.
inline const std::string kThinAir =
    "thread T0\n  rd x 1\n  wr y 1\n"
    "thread T1\n  rd y 1\n  wr x 1\n"
    "dp T0:0 -> T0:1\n"
    "dp T1:0 -> T1:1\n";

inline const std::string kLoadLoadHazard =
    "init: x=0\n"
    "thread T0\n  wr x 1\n"
    "thread T1\n  rd x 1\n  rd x 0\n";

inline History sb() { return parse_history(kStoreBuffering); }
inline History mp() { return parse_history(kMessagePassing); }

}  // namespace mmcheck::fixtures
