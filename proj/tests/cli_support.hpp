#ifndef PROJFEAS_TESTS_CLI_SUPPORT_HPP
#define PROJFEAS_TESTS_CLI_SUPPORT_HPP

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace testing_support {

struct CliResult {
  int code = -1;
  std::string out;
};

// Runs the projfeas binary with `args`; stderr is folded into `out`.
inline CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(PROJFEAS_CLI) + " " + args + " 2>&1";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::filesystem::path scratch(const std::string& name) {
  std::filesystem::path dir = std::filesystem::path(PROJFEAS_SCRATCH);
  std::filesystem::create_directories(dir);
  return dir / name;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

}  // namespace testing_support

#endif  // PROJFEAS_TESTS_CLI_SUPPORT_HPP
