/*
 * Copyright 2026 The seqbo Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "seqbo/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <stdexcept>

namespace seqbo {

namespace {

// A broken stdin pipe (child exited early) must not kill this process.
struct SigpipeGuard {
  SigpipeGuard() { signal(SIGPIPE, SIG_IGN); }
};

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

}  // namespace

SubprocessResult run_command(const std::string& command,
                             const std::string& input,
                             double timeout_seconds) {
  static SigpipeGuard sigpipe_guard;
  if (timeout_seconds <= 0.0) {
    throw std::invalid_argument("run_command: timeout must be positive");
  }

  int in_pipe[2];   // parent writes -> child stdin
  int out_pipe[2];  // child stdout -> parent reads
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
    throw std::runtime_error("run_command: pipe creation failed: " +
                             std::string(std::strerror(errno)));
  }

  const pid_t pid = fork();
  if (pid < 0) {
    throw std::runtime_error("run_command: fork failed: " +
                             std::string(std::strerror(errno)));
  }
  if (pid == 0) {
    // Child: own process group so a timeout can kill descendants too.
    setpgid(0, 0);
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), (char*)nullptr);
    _exit(127);
  }

  close(in_pipe[0]);
  close(out_pipe[1]);

  // Feed stdin; EPIPE just means the child stopped reading.
  std::size_t written = 0;
  while (written < input.size()) {
    const ssize_t n =
        write(in_pipe[1], input.data() + written, input.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      break;
    }
    written += static_cast<std::size_t>(n);
  }
  close(in_pipe[1]);

  SubprocessResult result;
  const double deadline = now_seconds() + timeout_seconds;
  char buf[4096];
  for (;;) {
    const double remaining = deadline - now_seconds();
    if (remaining <= 0.0) {
      result.timed_out = true;
      break;
    }
    struct pollfd pfd{out_pipe[0], POLLIN, 0};
    const int pr = poll(&pfd, 1, static_cast<int>(remaining * 1000.0) + 1);
    if (pr < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (pr == 0) {
      result.timed_out = true;
      break;
    }
    const ssize_t n = read(out_pipe[0], buf, sizeof buf);
    if (n < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (n == 0) break;  // EOF
    result.output.append(buf, static_cast<std::size_t>(n));
  }
  close(out_pipe[0]);

  if (result.timed_out) {
    kill(-pid, SIGKILL);
  }
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (!result.timed_out && WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  }
  return result;
}

}  // namespace seqbo
