#pragma once

#include <string>
#include <vector>

#include "dtlf/checker.hpp"
#include "dtlf/syntax.hpp"

namespace dtlf::cli {

struct RunConfig {
  checker::CheckOptions opts;
  bool json = false;
  std::string bases;  // extra base declarations, ';'-separated decl lines
};

struct CmdResult {
  int code = 0;      // 0 yes/derivable, 1 no/unknown, 2 error
  std::string out;   // text already formatted per config
};

syntax::BaseRegistry make_registry(const RunConfig& cfg);

CmdResult cmd_entail(const std::string& tau, const std::string& psi, const std::string& phi,
                     const RunConfig& cfg);
CmdResult cmd_consistent(const std::string& tau, const std::string& phi, const RunConfig& cfg);
CmdResult cmd_compile(const std::string& tau, const std::string& phi, const RunConfig& cfg);
CmdResult cmd_check(const std::string& path, const RunConfig& cfg);
CmdResult cmd_eval(const std::string& term, const std::string& tau, const RunConfig& cfg);
CmdResult cmd_oracle(const std::string& tau, const std::string& psi, const std::string& phi,
                     const RunConfig& cfg);
CmdResult cmd_corpus(const std::vector<std::string>& paths, const RunConfig& cfg);

int run_main(int argc, char** argv);

}  // namespace dtlf::cli
