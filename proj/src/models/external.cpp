// SPDX-License-Identifier: Apache-2.0
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <thread>

#include "json.hpp"
#include "posthoc/error.hpp"
#include "posthoc/models.hpp"

namespace posthoc {
namespace {

using Clock = std::chrono::steady_clock;

int RemainingMs(Clock::time_point deadline) {
  const auto left =
      std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
  return left <= 0 ? 0 : static_cast<int>(std::min<long long>(left, 1 << 30));
}

std::string CsvCell(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

ExternalPredictor::ExternalPredictor(FeatureSchema schema, ExternalOptions options)
    : schema_(std::move(schema)), options_(std::move(options)) {
  Require(!options_.command.empty(), ErrorCode::kInvalidArgument,
          "external predictor needs a command");
  Require(options_.batch_size >= 1, ErrorCode::kInvalidArgument, "batch size must be >= 1");
  Require(options_.timeout.count() > 0, ErrorCode::kInvalidArgument, "timeout must be > 0");
  ::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2];   // parent -> child stdin
  int out_pipe[2];  // child stdout -> parent
  Require(::pipe2(in_pipe, O_CLOEXEC) == 0, ErrorCode::kIo, "pipe() failed");
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    Fail(ErrorCode::kIo, "pipe() failed");
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) ::close(fd);
    Fail(ErrorCode::kIo, "fork() failed");
  }
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", options_.command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  ::fcntl(to_child_, F_SETFL, ::fcntl(to_child_, F_GETFL) | O_NONBLOCK);
  ::fcntl(from_child_, F_SETFL, ::fcntl(from_child_, F_GETFL) | O_NONBLOCK);

  const std::string schema_line =
      "SCHEMA " + nlohmann::json::parse(schema_.ToJsonText()).dump() + "\n";
  try {
    WriteAll(schema_line);
  } catch (...) {
    Shutdown();
    throw;
  }
}

ExternalPredictor::~ExternalPredictor() { Shutdown(); }

void ExternalPredictor::Shutdown() noexcept {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    int status = 0;
    for (int attempt = 0; attempt < 200; ++attempt) {
      if (::waitpid(pid_, &status, WNOHANG) != 0) {
        pid_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, &status, 0);
    pid_ = -1;
  }
}

std::size_t ExternalPredictor::batches_sent() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return batches_;
}

std::string ExternalPredictor::description() const {
  return "external process '" + options_.command + "' (batch " +
         std::to_string(options_.batch_size) + ")";
}

void ExternalPredictor::WriteAll(const std::string& text) const {
  const auto deadline = Clock::now() + options_.timeout;
  std::size_t written = 0;
  char scratch[4096];
  while (written < text.size()) {
    const ssize_t n = ::write(to_child_, text.data() + written, text.size() - written);
    if (n > 0) {
      written += static_cast<std::size_t>(n);
      continue;
    }
    if (n < 0 && errno == EPIPE) {
      broken_ = true;
      Fail(ErrorCode::kProtocol, "external process exited (stdin closed)");
    }
    if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK && errno != EINTR) {
      broken_ = true;
      Fail(ErrorCode::kIo, std::string("write to external process failed: ") +
                               std::strerror(errno));
    }
    // Drain the child's output while waiting so neither side blocks.
    pollfd fds[2] = {{to_child_, POLLOUT, 0}, {from_child_, POLLIN, 0}};
    const int ready = ::poll(fds, 2, RemainingMs(deadline));
    if (ready == 0) {
      broken_ = true;
      Fail(ErrorCode::kTimeout, "timed out writing to external process");
    }
    if (fds[1].revents & POLLIN) {
      const ssize_t got = ::read(from_child_, scratch, sizeof scratch);
      if (got > 0) buffer_.append(scratch, static_cast<std::size_t>(got));
    }
  }
}

std::string ExternalPredictor::ReadLine(Clock::time_point deadline, std::size_t received,
                                        std::size_t expected) const {
  char scratch[4096];
  while (true) {
    const auto newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    pollfd fd{from_child_, POLLIN, 0};
    const int ready = ::poll(&fd, 1, RemainingMs(deadline));
    if (ready == 0) {
      broken_ = true;
      if (received == 0) {
        Fail(ErrorCode::kTimeout, "external process did not answer within " +
                                      std::to_string(options_.timeout.count()) + " ms");
      }
      Fail(ErrorCode::kProtocol, "protocol desync: received " + std::to_string(received) +
                                     " of " + std::to_string(expected) +
                                     " predictions before timeout");
    }
    const ssize_t got = ::read(from_child_, scratch, sizeof scratch);
    if (got > 0) {
      buffer_.append(scratch, static_cast<std::size_t>(got));
      continue;
    }
    if (got < 0 && (errno == EAGAIN || errno == EINTR)) continue;
    broken_ = true;
    if (received == 0) Fail(ErrorCode::kProtocol, "external process exited");
    Fail(ErrorCode::kProtocol, "protocol desync: external process exited after " +
                                   std::to_string(received) + " of " +
                                   std::to_string(expected) + " predictions");
  }
}

void ExternalPredictor::PredictBatch(const RowBatch& rows, std::size_t begin,
                                     std::size_t end, std::vector<double>& out) const {
  const std::size_t k = end - begin;
  // Anything already waiting on the pipe was not asked for.
  if (buffer_.empty()) {
    pollfd fd{from_child_, POLLIN, 0};
    if (::poll(&fd, 1, 0) > 0 && (fd.revents & POLLIN)) {
      char scratch[4096];
      const ssize_t got = ::read(from_child_, scratch, sizeof scratch);
      if (got > 0) buffer_.append(scratch, static_cast<std::size_t>(got));
    }
  }
  if (!buffer_.empty()) {
    broken_ = true;
    Fail(ErrorCode::kProtocol, "protocol desync: unsolicited output from external process");
  }

  std::string request = "PREDICT " + std::to_string(k) + "\n";
  for (std::size_t i = begin; i < end; ++i) {
    const auto row = rows.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) request.push_back(',');
      const Feature& f = schema_.feature(j);
      if (f.is_categorical()) {
        request += CsvCell(f.levels.at(static_cast<std::size_t>(row[j])));
      } else {
        request += FormatReal(row[j]);
      }
    }
    request.push_back('\n');
  }
  ++batches_;
  WriteAll(request);

  const auto deadline = Clock::now() + options_.timeout;
  for (std::size_t r = 0; r < k; ++r) {
    const std::string line = ReadLine(deadline, r, k);
    std::string_view text(line);
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto parsed = std::from_chars(text.data(), text.data() + text.size(), value);
    if (parsed.ec != std::errc() || parsed.ptr != text.data() + text.size() ||
        !std::isfinite(value)) {
      broken_ = true;
      Fail(ErrorCode::kProtocol, "non-numeric response '" + line + "' for row " +
                                     std::to_string(r + 1) + " of batch " +
                                     std::to_string(batches_));
    }
    out[begin + r] = value;
  }
  if (!buffer_.empty()) {
    broken_ = true;
    Fail(ErrorCode::kProtocol, "protocol desync: more response lines than rows in batch " +
                                   std::to_string(batches_));
  }
}

std::vector<double> ExternalPredictor::Predict(const RowBatch& rows) const {
  std::lock_guard<std::mutex> lock(mutex_);
  Require(!broken_, ErrorCode::kProtocol, "external predictor is unusable after an earlier failure");
  Require(rows.n_cols() == schema_.size(), ErrorCode::kSchema,
          "rows do not match the external model schema");
  std::vector<double> out(rows.n_rows());
  for (std::size_t begin = 0; begin < rows.n_rows(); begin += options_.batch_size) {
    const std::size_t end = std::min(rows.n_rows(), begin + options_.batch_size);
    PredictBatch(rows, begin, end, out);
  }
  return out;
}

}  // namespace posthoc
