#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ckn {

// Exit codes: 0 embeds / probe succeeded, 1 does not embed or unknown, 2 input error,
// 3 classifier and numerical probe disagree.
enum ExitCode { kExitEmbeds = 0, kExitNoEmbedding = 1, kExitInputError = 2, kExitMismatch = 3 };

// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ckn
