#ifndef UNTANGLE_CLI_HPP
#define UNTANGLE_CLI_HPP

namespace untangle {

// Exit codes: 0 success, 1 usage error, 2 audit or bound failure.
int run_cli(int argc, char** argv);

} // namespace untangle

#endif
