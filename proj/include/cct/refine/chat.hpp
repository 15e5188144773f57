#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cct::refine {

struct ChatMessage {
    std::string role; // "system", "user", "assistant"
    std::string content;
};

struct ChatRequest {
    std::string model_id;
    double temperature = 0.5;
    std::vector<ChatMessage> messages;
};

struct ChatResponse {
    std::string text;
    uint64_t prompt_tokens = 0;
    uint64_t completion_tokens = 0;
};

class ChatTransport {
public:
    virtual ~ChatTransport() = default;
    // Throws BackendUnavailable on transport failure.
    virtual ChatResponse complete(const ChatRequest& req) = 0;
};

// Speaks the common chat-completion JSON shape over plain HTTP.  The
// endpoint URL comes from the constructor; the bearer secret is read from
// the named environment variable at request time and never stored.
class HttpChatTransport : public ChatTransport {
public:
    HttpChatTransport(std::string url, std::string api_key_env);
    ChatResponse complete(const ChatRequest& req) override;

private:
    std::string url_;
    std::string api_key_env_;
};

// Replays recorded response bodies (same JSON shape the HTTP transport
// receives) from fixture files, in order; records every request it sees.
class ReplayTransport : public ChatTransport {
public:
    explicit ReplayTransport(std::vector<std::string> fixture_paths);
    ChatResponse complete(const ChatRequest& req) override;
    const std::vector<ChatRequest>& requests() const { return requests_; }

private:
    std::vector<std::string> fixtures_;
    size_t next_ = 0;
    std::vector<ChatRequest> requests_;
};

// Parses a chat-completion response body into ChatResponse.
ChatResponse parse_chat_response(const std::string& body);

// The response contract: exactly one fenced code block carrying the full
// revised source.  Returns its contents, or nullopt when the reply has
// zero blocks, several blocks, or an unterminated fence.
std::optional<std::string> extract_single_code_block(const std::string& text);

} // namespace cct::refine
