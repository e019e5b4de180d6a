// SPDX-License-Identifier: Apache-2.0
#include "dyngeo/errors.hpp"
#include "dyngeo/reasoner.hpp"
#include "dyngeo/render.hpp"

#include <httplib.h>

#include <cerrno>
#include <csignal>
#include <cstdlib>
#include <cstring>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace dyngeo {

namespace {

std::string render_or_empty(const LogicForm& lf) {
    try {
        return render_svg(lf);
    } catch (const EmptyForm&) {
        return {};
    }
}

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

Endpoint split_url(const std::string& url) {
    auto scheme = url.find("://");
    if (scheme == std::string::npos) throw Error("reasoner url needs a scheme: " + url);
    auto slash = url.find('/', scheme + 3);
    if (slash == std::string::npos) return {url, "/"};
    return {url.substr(0, slash), url.substr(slash)};
}

}  // namespace

// ---- HTTP -------------------------------------------------------------------------

HttpReasoner::HttpReasoner(std::string url, std::chrono::milliseconds timeout)
    : url_(std::move(url)), timeout_(timeout) {}

std::chrono::milliseconds HttpReasoner::default_timeout() {
    if (const char* env = std::getenv("DYNGEO_REASONER_TIMEOUT")) {
        char* end = nullptr;
        double seconds = std::strtod(env, &end);
        if (end != env && seconds > 0) return std::chrono::milliseconds(static_cast<long long>(seconds * 1000));
    }
    return std::chrono::seconds(120);
}

StepOutput HttpReasoner::next_step(const ReasonerInput& input) {
    auto [origin, path] = split_url(url_);
    httplib::Client client(origin);
    auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
    auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    auto body = canonical_dump(request_json(input, render_or_empty(input.current_form)));
    auto started = std::chrono::steady_clock::now();
    auto res = client.Post(path, body, "application/json");
    if (!res) {
        auto elapsed = std::chrono::steady_clock::now() - started;
        if (res.error() == httplib::Error::ConnectionTimeout ||
            (res.error() == httplib::Error::Read && elapsed >= timeout_))
            throw Timeout("reasoner did not answer within " + std::to_string(timeout_.count()) + " ms");
        throw Error("reasoner request failed: " + httplib::to_string(res.error()));
    }
    if (res->status != 200)
        throw ProtocolError("reasoner answered HTTP " + std::to_string(res->status), res->body);
    return parse_step(res->body);
}

// ---- child process ----------------------------------------------------------------

PipeReasoner::PipeReasoner(std::string command, std::chrono::milliseconds timeout)
    : command_(std::move(command)), timeout_(timeout) {}

PipeReasoner::~PipeReasoner() { stop(); }

void PipeReasoner::start() {
    int in[2], out[2];
    if (pipe(in) != 0 || pipe(out) != 0) throw Error("pipe: " + std::string(std::strerror(errno)));
    pid_t pid = fork();
    if (pid < 0) throw Error("fork: " + std::string(std::strerror(errno)));
    if (pid == 0) {
        dup2(in[0], STDIN_FILENO);
        dup2(out[1], STDOUT_FILENO);
        close(in[0]);
        close(in[1]);
        close(out[0]);
        close(out[1]);
        execl("/bin/sh", "sh", "-c", command_.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    close(in[0]);
    close(out[1]);
    pid_ = pid;
    to_child_ = in[1];
    from_child_ = out[0];
    std::signal(SIGPIPE, SIG_IGN);
}

void PipeReasoner::stop() {
    if (to_child_ >= 0) close(to_child_);
    if (from_child_ >= 0) close(from_child_);
    to_child_ = from_child_ = -1;
    if (pid_ > 0) {
        kill(pid_, SIGTERM);
        waitpid(pid_, nullptr, 0);
    }
    pid_ = -1;
    pending_.clear();
}

StepOutput PipeReasoner::next_step(const ReasonerInput& input) {
    if (pid_ < 0) start();
    auto line = canonical_dump(request_json(input, render_or_empty(input.current_form))) + "\n";
    for (std::size_t sent = 0; sent < line.size();) {
        auto n = write(to_child_, line.data() + sent, line.size() - sent);
        if (n < 0) {
            if (errno == EINTR) continue;
            stop();
            throw Error("reasoner process closed its input");
        }
        sent += static_cast<std::size_t>(n);
    }

    auto deadline = std::chrono::steady_clock::now() + timeout_;
    for (;;) {
        if (auto nl = pending_.find('\n'); nl != std::string::npos) {
            auto reply = pending_.substr(0, nl);
            pending_.erase(0, nl + 1);
            return parse_step(reply);
        }
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
        if (left.count() <= 0) {
            stop();
            throw Timeout("reasoner process did not answer within " + std::to_string(timeout_.count()) + " ms");
        }
        pollfd pfd{from_child_, POLLIN, 0};
        int ready = poll(&pfd, 1, static_cast<int>(left.count()));
        if (ready < 0 && errno == EINTR) continue;
        if (ready <= 0) continue;
        char buf[4096];
        auto n = read(from_child_, buf, sizeof buf);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) {
            auto partial = pending_;
            stop();
            throw ProtocolError("reasoner process exited without a reply", partial);
        }
        pending_.append(buf, static_cast<std::size_t>(n));
    }
}

}  // namespace dyngeo
