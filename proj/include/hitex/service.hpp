#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hitex/classifier.hpp"
#include "hitex/corpus.hpp"
#include "hitex/exercise.hpp"
#include "hitex/lexicons.hpp"

namespace hitex {

inline constexpr std::size_t kMaxRequestBytes = 10 * 1024 * 1024;
inline constexpr const char* kBindEnv = "HITEX_BIND";

// Immutable after load; handlers only read it.
struct ServiceState {
  std::map<std::string, std::vector<AnnotatedSentence>> corpora;
  std::string default_corpus;
  Lexicons lexicons;
  std::optional<CefrModel> model;
  std::optional<DistractorPool> distractors;
};

// Startup file: {"corpora": {name: path | [paths]}, "default_corpus", "kelly",
// "svalex", "lmi", "aux": {kind: path}, "model", "distractors"}. Relative
// paths resolve against `base_dir`.
ServiceState load_state(const nlohmann::json& startup, const std::string& base_dir = ".");
ServiceState load_state_file(const std::string& path);

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Pure request handlers; the HTTP layer only routes to them.
HttpResponse handle_select(const ServiceState& state, std::string_view body);
HttpResponse handle_criteria();
HttpResponse handle_classify(const ServiceState& state, std::string_view body, std::string_view content_type);
HttpResponse handle_exercises(const ServiceState& state, std::string_view body);
HttpResponse handle_evaluate(std::string_view body);
HttpResponse handle_concordance(const ServiceState& state, const std::map<std::string, std::string>& params);

// The JSON text every JSON endpoint and the CLI emit.
std::string dump_json(const nlohmann::json& j);

// Where concordance candidates come from.
class ConcordanceProvider {
 public:
  virtual ~ConcordanceProvider() = default;
  virtual std::vector<AnnotatedSentence> fetch(const SearchQuery& query) = 0;
};

class LocalProvider : public ConcordanceProvider {
 public:
  explicit LocalProvider(const std::vector<AnnotatedSentence>& corpus) : corpus_(corpus) {}
  std::vector<AnnotatedSentence> fetch(const SearchQuery& query) override;

 private:
  const std::vector<AnnotatedSentence>& corpus_;
};

// GETs <base_url>/concordance and parses the CoNLL-U payload.
class RemoteHttpProvider : public ConcordanceProvider {
 public:
  RemoteHttpProvider(std::string base_url, std::string corpus = "");
  std::vector<AnnotatedSentence> fetch(const SearchQuery& query) override;

 private:
  std::string base_url_;
  std::string corpus_;
};

// "host:port"; falls back to 127.0.0.1:8080.
std::pair<std::string, int> bind_address(const char* env_value);

class Server {
 public:
  explicit Server(const ServiceState& state);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Returns the bound port, or -1. Port 0 picks a free port.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace hitex
