#include "mhms/text_sum.hpp"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <map>

#include "json.hpp"

namespace mhms::text {

namespace {

using nlohmann::json;

double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

struct AdapterClient::Impl {
    AdapterConfig config;
    pid_t child = -1;
    int write_fd = -1;
    int read_fd = -1;
    std::string buffer;
    std::map<std::string, json> pending;  // responses seen before they were awaited

    explicit Impl(const AdapterConfig& cfg) : config(cfg) {
        // A dead peer must surface as an error on write, not kill the process.
        ::signal(SIGPIPE, SIG_IGN);
        switch (config.mode) {
            case AdapterConfig::Mode::Process:
                start_process();
                break;
            case AdapterConfig::Mode::Tcp:
                connect_tcp();
                break;
            case AdapterConfig::Mode::None:
                throw AdapterUnavailable("AdapterClient: no adapter configured");
        }
    }

    ~Impl() {
        if (write_fd >= 0 && write_fd != read_fd) ::close(write_fd);
        if (read_fd >= 0) ::close(read_fd);
        if (child > 0) {
            ::kill(child, SIGTERM);
            int status = 0;
            ::waitpid(child, &status, 0);
        }
    }

    void start_process() {
        if (config.command.empty()) {
            throw AdapterUnavailable("AdapterClient: empty adapter command");
        }
        int to_child[2];
        int from_child[2];
        if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) {
            throw AdapterUnavailable("AdapterClient: pipe() failed");
        }
        child = ::fork();
        if (child < 0) throw AdapterUnavailable("AdapterClient: fork() failed");
        if (child == 0) {
            ::dup2(to_child[0], STDIN_FILENO);
            ::dup2(from_child[1], STDOUT_FILENO);
            ::close(to_child[0]);
            ::close(to_child[1]);
            ::close(from_child[0]);
            ::close(from_child[1]);
            ::execl("/bin/sh", "sh", "-c", config.command.c_str(), static_cast<char*>(nullptr));
            _exit(127);
        }
        ::close(to_child[0]);
        ::close(from_child[1]);
        write_fd = to_child[1];
        read_fd = from_child[0];
    }

    void connect_tcp() {
        addrinfo hints{};
        hints.ai_family = AF_UNSPEC;
        hints.ai_socktype = SOCK_STREAM;
        addrinfo* result = nullptr;
        const std::string port = std::to_string(config.port);
        if (::getaddrinfo(config.host.c_str(), port.c_str(), &hints, &result) != 0) {
            throw AdapterUnavailable("AdapterClient: cannot resolve " + config.host);
        }
        int fd = -1;
        for (addrinfo* ai = result; ai != nullptr; ai = ai->ai_next) {
            fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
            if (fd < 0) continue;
            if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
            ::close(fd);
            fd = -1;
        }
        ::freeaddrinfo(result);
        if (fd < 0) {
            throw AdapterUnavailable("AdapterClient: cannot connect to " + config.host + ":" + port);
        }
        read_fd = fd;
        write_fd = fd;
    }

    void send_line(const std::string& line) {
        std::string framed = line;
        framed += '\n';
        std::size_t sent = 0;
        while (sent < framed.size()) {
            const ssize_t n = ::write(write_fd, framed.data() + sent, framed.size() - sent);
            if (n <= 0) throw AdapterUnavailable("AdapterClient: adapter stream closed on write");
            sent += static_cast<std::size_t>(n);
        }
    }

    /// Next full line from the adapter, waiting at most until `deadline`.
    std::string read_line(double deadline) {
        while (true) {
            const std::size_t pos = buffer.find('\n');
            if (pos != std::string::npos) {
                std::string line = buffer.substr(0, pos);
                buffer.erase(0, pos + 1);
                return line;
            }
            const double remaining = deadline - now_seconds();
            if (remaining <= 0.0) {
                throw AdapterUnavailable("AdapterClient: timed out waiting for response");
            }
            pollfd pfd{read_fd, POLLIN, 0};
            const int rc = ::poll(&pfd, 1, static_cast<int>(remaining * 1000.0) + 1);
            if (rc < 0) throw AdapterUnavailable("AdapterClient: poll() failed");
            if (rc == 0) continue;
            char chunk[4096];
            const ssize_t n = ::read(read_fd, chunk, sizeof(chunk));
            if (n <= 0) throw AdapterUnavailable("AdapterClient: adapter stream closed");
            buffer.append(chunk, static_cast<std::size_t>(n));
        }
    }

    json await_response(const std::string& id) {
        if (auto it = pending.find(id); it != pending.end()) {
            json response = std::move(it->second);
            pending.erase(it);
            return response;
        }
        const double deadline = now_seconds() + config.timeout_s;
        while (true) {
            const std::string line = read_line(deadline);
            json response = json::parse(line, nullptr, false);
            if (response.is_discarded() || !response.is_object()) {
                throw AdapterProtocolError("AdapterClient: response is not a JSON object: " + line);
            }
            if (!response.contains("id") || !response["id"].is_string()) {
                throw AdapterProtocolError("AdapterClient: response is missing a string id");
            }
            if (!response.contains("v") || response["v"] != 1) {
                throw AdapterProtocolError("AdapterClient: unsupported protocol version");
            }
            if (response["id"] == id) return response;
            std::string other_id = response["id"].get<std::string>();
            pending[other_id] = std::move(response);
        }
    }
};

AdapterClient::AdapterClient(const AdapterConfig& config) : impl_(std::make_unique<Impl>(config)) {}

AdapterClient::~AdapterClient() = default;

std::vector<std::string> AdapterClient::summarize(const std::string& id, const std::string& text,
                                                  int n) {
    json request = {{"id", id}, {"v", 1}, {"text", text}, {"n", n}};
    impl_->send_line(request.dump());  // dump() escapes embedded newlines

    const json response = impl_->await_response(id);
    if (!response.contains("candidates") || !response["candidates"].is_array()) {
        throw AdapterProtocolError("AdapterClient: response has no candidates array");
    }
    std::vector<std::string> out;
    for (const auto& cand : response["candidates"]) {
        if (!cand.is_string()) {
            throw AdapterProtocolError("AdapterClient: candidate is not a string");
        }
        out.push_back(cand.get<std::string>());
    }
    if (out.empty()) {
        throw AdapterProtocolError("AdapterClient: adapter returned 0 candidates");
    }
    return out;
}

std::vector<std::vector<std::string>> AdapterClient::summarize_batch(
    const std::vector<std::string>& texts, int n) {
    const std::size_t cap = static_cast<std::size_t>(std::max(1, impl_->config.parallelism));
    std::vector<std::vector<std::string>> results(texts.size());
    std::size_t next_send = 0;
    std::size_t next_recv = 0;
    while (next_recv < texts.size()) {
        while (next_send < texts.size() && next_send - next_recv < cap) {
            json request = {{"id", "seg-" + std::to_string(next_send)},
                            {"v", 1},
                            {"text", texts[next_send]},
                            {"n", n}};
            impl_->send_line(request.dump());
            ++next_send;
        }
        const std::string id = "seg-" + std::to_string(next_recv);
        const json response = impl_->await_response(id);
        if (!response.contains("candidates") || !response["candidates"].is_array() ||
            response["candidates"].empty()) {
            throw AdapterProtocolError("AdapterClient: bad candidates for " + id);
        }
        std::vector<std::string> out;
        for (const auto& cand : response["candidates"]) {
            if (!cand.is_string()) {
                throw AdapterProtocolError("AdapterClient: candidate is not a string");
            }
            out.push_back(cand.get<std::string>());
        }
        results[next_recv] = std::move(out);
        ++next_recv;
    }
    return results;
}

}  // namespace mhms::text
