// Copyright 2026 The FacEval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP clients for an external scoring service.
//
//   POST <base>/score       {"pairs": [{"id", "dialogue", "summary"}]}
//                        -> {"results": [{"id", "tokens", "logprobs"} |
//                                        {"id", "error"}]}
//   POST <base>/paraphrase  {"text", "k"} -> {"paraphrases": [str]}
//                           501 when the service has no paraphraser.

#ifndef FACEVAL_REMOTE_H_
#define FACEVAL_REMOTE_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "faceval/scoring.h"
#include "faceval/transforms.h"

namespace faceval {

// Overrides any scorer URL given on the command line.
inline constexpr char kScorerUrlEnv[] = "FACEVAL_SCORER_URL";

struct ServiceUrl {
  std::string scheme_host_port;  // "http://localhost:8000"
  std::string path_prefix;       // "" or "/v1", never a trailing slash

  // Accepts http://host[:port][/prefix] (https when built with TLS
  // support). Throws DomainError otherwise.
  static ServiceUrl Parse(std::string_view url);
  std::string ToString() const { return scheme_host_port + path_prefix; }
};

struct HttpOptions {
  int connect_timeout_s = 5;
  int read_timeout_s = 300;
};

// Returns the environment override when set and non-empty, else `url`.
std::string ResolveScorerUrl(std::string_view url);

// Connection failures throw ServiceError (the run cannot proceed). A
// timeout, a non-200 status, or a body that violates the protocol fails
// the pairs of that request only. Results are matched to requests by id;
// ids missing from the response become per-pair errors.
class HttpScorer : public Scorer {
 public:
  explicit HttpScorer(std::string_view url, HttpOptions options = {});
  std::vector<ScoreResult> Score(
      std::span<const ScoreRequest> requests) const override;
  std::string id() const override { return "http:" + url_.ToString(); }

 private:
  ServiceUrl url_;
  HttpOptions options_;
};

// A 501 reply means no paraphraser is configured and yields no
// paraphrases. Other failures throw ServiceError.
class HttpParaphraseProvider : public ParaphraseProvider {
 public:
  explicit HttpParaphraseProvider(std::string_view url,
                                  HttpOptions options = {});
  std::vector<std::string> Paraphrase(std::string_view text,
                                      int k) const override;
  std::string id() const override { return "http:" + url_.ToString(); }

 private:
  ServiceUrl url_;
  HttpOptions options_;
};

}  // namespace faceval

#endif  // FACEVAL_REMOTE_H_
