#include "cct/refine/chat.hpp"

#include "cct/errors.hpp"
#include "cct/util.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <cstdlib>

namespace cct::refine {

namespace {

using nlohmann::json;

json request_body(const ChatRequest& req) {
    json msgs = json::array();
    for (const auto& m : req.messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
    return {{"model", req.model_id}, {"temperature", req.temperature}, {"messages", msgs}};
}

} // namespace

ChatResponse parse_chat_response(const std::string& body) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::exception& e) {
        throw BackendUnavailable(std::string("malformed chat response body: ") + e.what());
    }
    ChatResponse out;
    try {
        out.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
        throw BackendUnavailable("chat response lacks choices[0].message.content");
    }
    if (j.contains("usage")) {
        out.prompt_tokens = j["usage"].value("prompt_tokens", 0ULL);
        out.completion_tokens = j["usage"].value("completion_tokens", 0ULL);
    } else {
        // crude fallback so cost accounting never silently reads zero
        out.prompt_tokens = 0;
        out.completion_tokens = out.text.size() / 4;
    }
    return out;
}

HttpChatTransport::HttpChatTransport(std::string url, std::string api_key_env)
    : url_(std::move(url)), api_key_env_(std::move(api_key_env)) {}

ChatResponse HttpChatTransport::complete(const ChatRequest& req) {
    std::string scheme_sep = "://";
    auto sep = url_.find(scheme_sep);
    if (sep == std::string::npos)
        throw BackendUnavailable("endpoint URL '" + url_ + "' has no scheme");
    std::string scheme = url_.substr(0, sep);
    if (scheme != "http")
        throw BackendUnavailable("this build speaks plain http only; point the endpoint at an "
                                 "http:// gateway or use recorded fixtures");
    auto path_pos = url_.find('/', sep + scheme_sep.size());
    std::string host = url_.substr(sep + scheme_sep.size(),
                                   path_pos == std::string::npos ? std::string::npos
                                                                 : path_pos - sep - scheme_sep.size());
    std::string path = path_pos == std::string::npos ? "/" : url_.substr(path_pos);

    httplib::Client client(("http://" + host).c_str());
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(120, 0);

    httplib::Headers headers;
    if (const char* key = std::getenv(api_key_env_.c_str()); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);

    auto res = client.Post(path.c_str(), headers, request_body(req).dump(), "application/json");
    if (!res)
        throw BackendUnavailable("chat endpoint unreachable: " + httplib::to_string(res.error()));
    if (res->status != 200)
        throw BackendUnavailable("chat endpoint returned status " + std::to_string(res->status) +
                                 ": " + res->body.substr(0, 400));
    return parse_chat_response(res->body);
}

ReplayTransport::ReplayTransport(std::vector<std::string> fixture_paths)
    : fixtures_(std::move(fixture_paths)) {}

ChatResponse ReplayTransport::complete(const ChatRequest& req) {
    if (next_ >= fixtures_.size())
        throw BackendUnavailable("replay transport exhausted after " +
                                 std::to_string(fixtures_.size()) + " exchanges");
    requests_.push_back(req);
    std::string body = read_file(fixtures_[next_++]);
    return parse_chat_response(body);
}

std::optional<std::string> extract_single_code_block(const std::string& text) {
    std::vector<size_t> fences;
    size_t pos = 0;
    while ((pos = text.find("```", pos)) != std::string::npos) {
        fences.push_back(pos);
        pos += 3;
    }
    if (fences.size() != 2) return std::nullopt;

    size_t open_line_end = text.find('\n', fences[0]);
    if (open_line_end == std::string::npos || open_line_end > fences[1]) return std::nullopt;
    return text.substr(open_line_end + 1, fences[1] - open_line_end - 1);
}

} // namespace cct::refine
