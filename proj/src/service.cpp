#include "phrasemine/service.hpp"

#include <charconv>
#include <optional>

#include "httplib.h"
#include "json.hpp"

namespace phrasemine {

using json = nlohmann::json;

ServiceModel::ServiceModel(MinedModel m) : mined(std::move(m)) {
    fw_mask = function_word_mask(mined.fws, mined.index.candidate_count());
}

std::vector<ConcordanceHit> concordance(const Corpus& corpus, const SymmetricIndex& index, TextView q,
                                        std::uint32_t left, std::uint32_t right, std::size_t limit,
                                        std::size_t offset) {
    std::vector<ConcordanceHit> hits;
    for (const auto& ref : index.occurrences(q, limit, offset)) {
        const Text& unit = corpus.unit(ref.unit);
        const auto unit_len = static_cast<std::uint32_t>(unit.size());
        ConcordanceHit h;
        h.match = ref;
        const std::uint32_t from = ref.start >= left ? ref.start - left : 0;
        const std::uint32_t to = unit_len - ref.end >= right ? ref.end + right : unit_len;
        h.left = unit.substr(from, ref.start - from);
        h.text = unit.substr(ref.start, ref.length());
        h.right = unit.substr(ref.end, to - ref.end);
        h.left_truncated = h.left.size() < left;
        h.right_truncated = h.right.size() < right;
        hits.push_back(std::move(h));
    }
    return hits;
}

namespace {

struct BadRequest {
    std::string message;
};

ServiceResponse json_response(int status, const json& body) {
    ServiceResponse r;
    r.status = status;
    r.body = body.dump();
    return r;
}

ServiceResponse error_response(int status, const std::string& message) {
    return json_response(status, json{{"error", message}});
}

ServiceResponse not_loaded() { return error_response(503, "model not loaded"); }

std::optional<std::string> param(const QueryParams& params, const std::string& name) {
    const auto it = params.find(name);
    if (it == params.end()) return std::nullopt;
    return it->second;
}

std::int64_t integer_param(const QueryParams& params, const std::string& name, std::int64_t fallback) {
    const auto v = param(params, name);
    if (!v) return fallback;
    std::int64_t out = 0;
    const auto [end, ec] = std::from_chars(v->data(), v->data() + v->size(), out);
    if (ec != std::errc() || end != v->data() + v->size())
        throw BadRequest{name + " must be an integer"};
    return out;
}

Text query_text(const QueryParams& params) {
    const auto q = param(params, "q");
    if (!q || q->empty()) throw BadRequest{"q must not be empty"};
    try {
        return decode_utf8(*q);
    } catch (const EncodingError&) {
        throw BadRequest{"q is not valid UTF-8"};
    }
}

std::size_t limit_param(const QueryParams& params, std::size_t fallback) {
    const auto limit = integer_param(params, "limit", static_cast<std::int64_t>(fallback));
    if (limit <= 0 || static_cast<std::uint64_t>(limit) > Service::kMaxLimit)
        throw BadRequest{"limit must lie in 1.." + std::to_string(Service::kMaxLimit)};
    return static_cast<std::size_t>(limit);
}

}  // namespace

void Service::set_model(std::shared_ptr<const ServiceModel> model) {
    std::lock_guard lock(mu_);
    model_ = std::move(model);
}

std::shared_ptr<const ServiceModel> Service::model() const {
    std::lock_guard lock(mu_);
    return model_;
}

ServiceResponse Service::expand(const QueryParams& params) const {
    const auto m = model();
    if (!m) return not_loaded();
    try {
        const Text q = query_text(params);
        const std::size_t limit = limit_param(params, kDefaultExpandLimit);
        json list = json::array();
        for (const auto& e : kernel_expansion(q, m->mined.phrases, m->fw_mask, m->mined.index, limit))
            list.push_back({{"text", encode_utf8(e.text)}, {"occ", e.occ}});
        return json_response(200, json{{"query", encode_utf8(q)}, {"expansions", std::move(list)}});
    } catch (const BadRequest& e) {
        return error_response(400, e.message);
    }
}

ServiceResponse Service::concordance(const QueryParams& params) const {
    const auto m = model();
    if (!m) return not_loaded();
    try {
        const Text q = query_text(params);
        const auto left = integer_param(params, "left", kDefaultWidth);
        const auto right = integer_param(params, "right", kDefaultWidth);
        if (left < 0 || right < 0) throw BadRequest{"context widths must not be negative"};
        const std::size_t limit = limit_param(params, kDefaultConcordanceLimit);
        const auto offset = integer_param(params, "offset", 0);
        if (offset < 0) throw BadRequest{"offset must not be negative"};

        const auto& idx = m->mined.index;
        const std::uint64_t total = idx.occ(q);
        constexpr std::int64_t kWidthCap = std::numeric_limits<std::uint32_t>::max();
        json hits = json::array();
        for (const auto& h : phrasemine::concordance(m->mined.corpus, idx, q,
                                                     static_cast<std::uint32_t>(std::min(left, kWidthCap)),
                                                     static_cast<std::uint32_t>(std::min(right, kWidthCap)), limit,
                                                     static_cast<std::size_t>(offset))) {
            hits.push_back({{"unit", h.match.unit},
                            {"start", h.match.start},
                            {"end", h.match.end},
                            {"left", encode_utf8(h.left)},
                            {"match", encode_utf8(h.text)},
                            {"right", encode_utf8(h.right)},
                            {"left_truncated", h.left_truncated},
                            {"right_truncated", h.right_truncated}});
        }
        auto r = json_response(200, json{{"query", encode_utf8(q)},
                                         {"total", total},
                                         {"offset", offset},
                                         {"hits", std::move(hits)}});
        r.headers["X-Total-Count"] = std::to_string(total);
        return r;
    } catch (const BadRequest& e) {
        return error_response(400, e.message);
    }
}

ServiceResponse Service::stats() const {
    const auto m = model();
    if (!m) return not_loaded();
    const auto& mm = m->mined;
    return json_response(200, json{{"units", mm.corpus.unit_count()},
                                   {"symbols", mm.corpus.symbol_count()},
                                   {"fw_count", mm.fws.size()},
                                   {"phrase_count", mm.phrases.support()},
                                   {"iteration", mm.model.final_iteration},
                                   {"corpus_digest", mm.corpus.digest()}});
}

struct HttpServer::Impl {
    const Service& service;
    httplib::Server server;

    explicit Impl(const Service& s) : service(s) {
        server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                    {"Access-Control-Expose-Headers", "X-Total-Count"}});
        auto route = [this](const char* path, ServiceResponse (Service::*handler)(const QueryParams&) const) {
            server.Get(path, [this, handler](const httplib::Request& req, httplib::Response& res) {
                send((service.*handler)(req.params), res);
            });
        };
        route("/api/expand", &Service::expand);
        route("/api/concordance", &Service::concordance);
        server.Get("/api/stats", [this](const httplib::Request&, httplib::Response& res) { send(service.stats(), res); });
        server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) {
            res.status = 204;
            res.set_header("Access-Control-Allow-Methods", "GET, OPTIONS");
            res.set_header("Access-Control-Allow-Headers", "Content-Type");
        });
    }

    static void send(const ServiceResponse& r, httplib::Response& res) {
        res.status = r.status;
        for (const auto& [k, v] : r.headers) res.set_header(k, v);
        res.set_content(r.body, "application/json; charset=utf-8");
    }
};

HttpServer::HttpServer(const Service& service) : impl_(std::make_unique<Impl>(service)) {}
HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) {
        const int bound = impl_->server.bind_to_any_port(host);
        if (bound < 0) throw IoError("cannot bind " + host);
        return bound;
    }
    if (!impl_->server.bind_to_port(host, port)) throw IoError("cannot bind " + host + ":" + std::to_string(port));
    return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_) impl_->server.stop();
}

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

bool HttpServer::running() const { return impl_->server.is_running(); }

}  // namespace phrasemine
