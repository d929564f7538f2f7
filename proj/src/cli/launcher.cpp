#include "corticarc/cli/launcher.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <climits>
#include <cstring>
#include <stdexcept>

extern char** environ;

namespace corticarc::cli {

std::vector<partition::Endpoint> free_local_endpoints(int count) {
  std::vector<partition::Endpoint> out;
  std::vector<int> held;
  for (int k = 0; k < count; ++k) {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    socklen_t len = sizeof addr;
    if (fd < 0 || ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
        ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
      for (int h : held) ::close(h);
      throw std::runtime_error("launcher: cannot probe a free port");
    }
    held.push_back(fd);
    out.push_back({"127.0.0.1", ntohs(addr.sin_port)});
  }
  for (int h : held) ::close(h);
  return out;
}

std::string format_endpoints(const std::vector<partition::Endpoint>& endpoints) {
  std::string s;
  for (const auto& e : endpoints) {
    if (!s.empty()) s += ',';
    s += e.host + ":" + std::to_string(e.port);
  }
  return s;
}

std::string self_executable() {
  char buf[PATH_MAX];
  const ssize_t n = ::readlink("/proc/self/exe", buf, sizeof buf - 1);
  if (n <= 0) throw std::runtime_error("launcher: cannot resolve own executable");
  return std::string(buf, static_cast<std::size_t>(n));
}

int launch_local(const std::string& executable, const std::vector<std::string>& args, int workers) {
  const std::string hosts = format_endpoints(free_local_endpoints(workers));
  std::vector<pid_t> pids;
  for (int rank = 0; rank < workers; ++rank) {
    std::vector<std::string> env_strings;
    for (char** e = environ; *e != nullptr; ++e) {
      if (std::strncmp(*e, "CORTICARC_RANK=", 15) == 0 || std::strncmp(*e, "CORTICARC_SIZE=", 15) == 0 ||
          std::strncmp(*e, "CORTICARC_HOSTS=", 16) == 0) {
        continue;
      }
      env_strings.emplace_back(*e);
    }
    env_strings.push_back("CORTICARC_RANK=" + std::to_string(rank));
    env_strings.push_back("CORTICARC_SIZE=" + std::to_string(workers));
    env_strings.push_back("CORTICARC_HOSTS=" + hosts);
    std::vector<char*> envp;
    for (auto& s : env_strings) envp.push_back(s.data());
    envp.push_back(nullptr);
    std::vector<std::string> argv_strings{executable};
    argv_strings.insert(argv_strings.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_strings) argv.push_back(s.data());
    argv.push_back(nullptr);
    pid_t pid = 0;
    if (::posix_spawn(&pid, executable.c_str(), nullptr, nullptr, argv.data(), envp.data()) != 0) {
      for (pid_t p : pids) ::kill(p, SIGTERM);
      for (pid_t p : pids) ::waitpid(p, nullptr, 0);
      throw std::runtime_error("launcher: cannot start worker " + std::to_string(rank));
    }
    pids.push_back(pid);
  }

  int result = 0;
  std::size_t alive = pids.size();
  while (alive > 0) {
    int status = 0;
    const pid_t done = ::waitpid(-1, &status, 0);
    if (done < 0) break;
    bool ours = false;
    for (pid_t& p : pids) {
      if (p == done) {
        p = -1;
        ours = true;
      }
    }
    if (!ours) continue;
    --alive;
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
    if (code != 0 && result == 0) {
      result = code;
      for (pid_t p : pids) {
        if (p > 0) ::kill(p, SIGTERM);
      }
    }
  }
  return result;
}

}  // namespace corticarc::cli
