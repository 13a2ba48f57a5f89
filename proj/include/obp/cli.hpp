#pragma once

namespace obp::cli {

// Exit codes: 0 ok, 1 parse, 2 domain, 3 precondition, 4 check-failure.
int run(int argc, const char* const* argv);

}  // namespace obp::cli
