#include "blockopt/subprocess.hpp"

#include <cerrno>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "blockopt/json_io.hpp"

namespace blockopt {

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

bool write_all(int fd, const std::string& data) {
  std::size_t done = 0;
  while (done < data.size()) {
    const ssize_t n = ::write(fd, data.data() + done, data.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    done += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

SubprocessEvaluator::SubprocessEvaluator(std::string command, std::string dataset_ref)
    : command_(std::move(command)), dataset_ref_(std::move(dataset_ref)) {
  // a dead child must surface as EPIPE, not kill the driver
  std::signal(SIGPIPE, SIG_IGN);
}

SubprocessEvaluator::~SubprocessEvaluator() { shutdown(false); }

void SubprocessEvaluator::spawn() {
  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) throw std::runtime_error("pipe failed");
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw std::runtime_error("pipe failed");
  }
  std::string cmd = command_;
  if (!dataset_ref_.empty()) cmd += " " + shell_quote(dataset_ref_);

  const pid_t pid = ::fork();
  if (pid < 0) throw std::runtime_error(std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  buffer_.clear();
  ++spawns_;
}

void SubprocessEvaluator::shutdown(bool force) {
  if (pid_ < 0) return;
  if (to_child_ >= 0) ::close(to_child_);
  int status = 0;
  if (!force) {
    // closed stdin asks the child to exit; give it a moment before killing
    for (int i = 0; i < 100 && ::waitpid(pid_, &status, WNOHANG) == 0; ++i) ::usleep(10000);
    if (::waitpid(pid_, &status, WNOHANG) == 0) force = true;
  }
  if (force) {
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
  }
  if (from_child_ >= 0) ::close(from_child_);
  pid_ = -1;
  to_child_ = -1;
  from_child_ = -1;
  buffer_.clear();
}

bool SubprocessEvaluator::read_line(std::string& line, double timeout_s) {
  using clock = std::chrono::steady_clock;
  const bool bounded = std::isfinite(timeout_s);
  const auto deadline =
      clock::now() + std::chrono::duration_cast<clock::duration>(
                         std::chrono::duration<double>(bounded ? timeout_s : 0.0));
  for (;;) {
    if (auto pos = buffer_.find('\n'); pos != std::string::npos) {
      line = buffer_.substr(0, pos);
      buffer_.erase(0, pos + 1);
      return true;
    }
    int wait_ms = -1;
    if (bounded) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - clock::now());
      if (left.count() <= 0) return false;
      wait_ms = static_cast<int>(left.count());
    }
    pollfd pfd{from_child_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, wait_ms);
    if (rc < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("poll failed");
    }
    if (rc == 0) return false;
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("read from objective process failed");
    }
    if (n == 0) throw std::runtime_error("objective process exited");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

EvalOutcome SubprocessEvaluator::evaluate(const Assignment& a, double fidelity, double timeout_s) {
  std::lock_guard lock(mu_);
  try {
    if (pid_ < 0) spawn();
    const long long id = next_id_++;
    const json request = {{"id", id}, {"assignment", to_json(a)}, {"fidelity", fidelity}};
    if (!write_all(to_child_, request.dump() + "\n")) {
      shutdown(true);
      return {TrialStatus::failed, 0.0, "objective process closed its input"};
    }
    std::string line;
    if (!read_line(line, timeout_s)) {
      shutdown(true);
      return {TrialStatus::timeout, 0.0, "objective process exceeded timeout"};
    }
    const json response = json::parse(line);
    if (response.value("id", -1LL) != id) {
      shutdown(true);
      return {TrialStatus::failed, 0.0, "response id mismatch"};
    }
    if (response.contains("error")) {
      return {TrialStatus::failed, 0.0, response.at("error").get<std::string>()};
    }
    const double v = response.at("value").get<double>();
    if (!std::isfinite(v)) return {TrialStatus::failed, 0.0, "non-finite objective value"};
    return {TrialStatus::ok, v, {}};
  } catch (const std::exception& e) {
    shutdown(true);
    return {TrialStatus::failed, 0.0, e.what()};
  }
}

}  // namespace blockopt
