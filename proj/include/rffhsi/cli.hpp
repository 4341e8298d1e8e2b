#ifndef RFFHSI_CLI_HPP
#define RFFHSI_CLI_HPP

#include <string>
#include <vector>

namespace rffhsi {

// Runs one CLI invocation (args excludes the program name). Returns the
// process exit code: 0 success, 1 categorized runtime error, 2 usage error.
int cli_dispatch(const std::vector<std::string>& args);

}  // namespace rffhsi

#endif
