#ifndef VPS_CLI_HPP
#define VPS_CLI_HPP

namespace vps {

// Front end for the vps tool. Exit codes: 0 success, 1 runtime abort,
// 2 invalid or non-divergence-free input, 3 flag errors.
int run_cli(int argc, const char* const* argv);

}  // namespace vps

#endif  // VPS_CLI_HPP
