#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "phrasemine/artifacts.hpp"

namespace phrasemine {

// Read-only model snapshot shared by all request handlers.
struct ServiceModel {
    MinedModel mined;
    std::vector<bool> fw_mask;

    explicit ServiceModel(MinedModel m);
};

using QueryParams = std::multimap<std::string, std::string>;

struct ServiceResponse {
    int status = 200;
    std::string body;  // JSON
    std::map<std::string, std::string> headers;
};

struct ConcordanceHit {
    SubstringRef match;
    Text left, text, right;
    bool left_truncated = false;   // the unit starts before the requested width is reached
    bool right_truncated = false;
};

// Occurrences of q in corpus order, paged, with up to left/right symbols of context
// taken from the same unit.
std::vector<ConcordanceHit> concordance(const Corpus& corpus, const SymmetricIndex& index, TextView q,
                                        std::uint32_t left, std::uint32_t right, std::size_t limit,
                                        std::size_t offset);

class Service {
public:
    static constexpr std::size_t kDefaultExpandLimit = 20;
    static constexpr std::size_t kDefaultConcordanceLimit = 50;
    static constexpr std::size_t kMaxLimit = 10000;
    static constexpr std::uint32_t kDefaultWidth = 40;

    Service() = default;
    explicit Service(std::shared_ptr<const ServiceModel> model) : model_(std::move(model)) {}

    void set_model(std::shared_ptr<const ServiceModel> model);
    std::shared_ptr<const ServiceModel> model() const;

    ServiceResponse expand(const QueryParams& params) const;
    ServiceResponse concordance(const QueryParams& params) const;
    ServiceResponse stats() const;

private:
    mutable std::mutex mu_;
    std::shared_ptr<const ServiceModel> model_;
};

// HTTP binding of a Service: GET /api/expand, /api/concordance, /api/stats, with CORS.
class HttpServer {
public:
    explicit HttpServer(const Service& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Port 0 picks a free port. Returns the bound port; throws IoError on failure.
    int bind(const std::string& host, int port);
    // Blocks until stop().
    void run();
    void stop();
    void wait_until_ready() const;
    bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace phrasemine
