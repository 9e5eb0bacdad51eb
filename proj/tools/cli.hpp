#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vmdg {

/// Entry point of the vm_rkdg tool. args excludes the program name.
/// Returns 0 on success, 1 on a failed --assert, 2 on configuration errors
/// and 3 when a run blows up.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace vmdg
