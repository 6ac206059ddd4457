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

#include "faceval/remote.h"

#include <cstdlib>
#include <unordered_map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "faceval/error.h"
#include "httplib.h"
#include "json.hpp"

namespace faceval {

namespace {

using json = nlohmann::json;

httplib::Client MakeClient(const ServiceUrl& url, const HttpOptions& options) {
  httplib::Client client(url.scheme_host_port);
  client.set_connection_timeout(options.connect_timeout_s, 0);
  client.set_read_timeout(options.read_timeout_s, 0);
  client.set_write_timeout(options.read_timeout_s, 0);
  return client;
}

bool IsConnectionFailure(httplib::Error error) {
  return error == httplib::Error::Connection ||
         error == httplib::Error::BindIPAddress ||
         error == httplib::Error::ProxyConnection ||
         error == httplib::Error::SSLConnection;
}

std::vector<ScoreResult> FailAll(std::span<const ScoreRequest> requests,
                                 const std::string& reason) {
  std::vector<ScoreResult> out;
  for (const ScoreRequest& r : requests) {
    out.push_back({r.id, std::nullopt, reason});
  }
  return out;
}

}  // namespace

ServiceUrl ServiceUrl::Parse(std::string_view url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) {
    throw DomainError("service URL needs a scheme: " + std::string(url));
  }
  const std::string_view scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw DomainError("unsupported URL scheme '" + std::string(scheme) + "'");
  }
  const std::size_t host_begin = scheme_end + 3;
  const std::size_t path_begin = url.find('/', host_begin);
  ServiceUrl out;
  out.scheme_host_port = std::string(url.substr(0, path_begin));
  if (out.scheme_host_port.size() == host_begin) {
    throw DomainError("service URL has no host: " + std::string(url));
  }
  if (path_begin != std::string_view::npos) {
    out.path_prefix = std::string(url.substr(path_begin));
    while (!out.path_prefix.empty() && out.path_prefix.back() == '/') {
      out.path_prefix.pop_back();
    }
  }
  return out;
}

std::string ResolveScorerUrl(std::string_view url) {
  const char* env = std::getenv(kScorerUrlEnv);
  if (env != nullptr && *env != '\0') return env;
  return std::string(url);
}

HttpScorer::HttpScorer(std::string_view url, HttpOptions options)
    : url_(ServiceUrl::Parse(url)), options_(options) {}

std::vector<ScoreResult> HttpScorer::Score(
    std::span<const ScoreRequest> requests) const {
  if (requests.empty()) return {};
  httplib::Client client = MakeClient(url_, options_);
  const std::string body = ScoreRequestsToJson(requests).dump();
  httplib::Result res =
      client.Post(url_.path_prefix + "/score", body, "application/json");
  if (!res) {
    if (IsConnectionFailure(res.error())) {
      throw ServiceError(fmt::format("scorer at {} unreachable: {}",
                                     url_.ToString(),
                                     httplib::to_string(res.error())));
    }
    return FailAll(requests,
                   "scorer request failed: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    return FailAll(requests, fmt::format("scorer returned HTTP {}", res->status));
  }

  std::vector<ScoreResult> results;
  try {
    results = ScoreResultsFromJson(json::parse(res->body));
  } catch (const std::exception& e) {
    return FailAll(requests, std::string("protocol violation: ") + e.what());
  }
  std::unordered_map<std::string, ScoreResult> by_id;
  for (ScoreResult& r : results) {
    std::string key = r.id;
    by_id.insert_or_assign(std::move(key), std::move(r));
  }
  std::vector<ScoreResult> out;
  for (const ScoreRequest& request : requests) {
    auto it = by_id.find(request.id);
    if (it == by_id.end()) {
      out.push_back({request.id, std::nullopt, "no result in response"});
    } else {
      out.push_back(std::move(it->second));
    }
  }
  return out;
}

HttpParaphraseProvider::HttpParaphraseProvider(std::string_view url,
                                               HttpOptions options)
    : url_(ServiceUrl::Parse(url)), options_(options) {}

std::vector<std::string> HttpParaphraseProvider::Paraphrase(
    std::string_view text, int k) const {
  httplib::Client client = MakeClient(url_, options_);
  const json request = {{"text", std::string(text)}, {"k", k}};
  httplib::Result res = client.Post(url_.path_prefix + "/paraphrase",
                                    request.dump(), "application/json");
  if (!res) {
    throw ServiceError(fmt::format("paraphraser at {} failed: {}",
                                   url_.ToString(),
                                   httplib::to_string(res.error())));
  }
  if (res->status == 501) {
    spdlog::debug("paraphraser at {} is not available", url_.ToString());
    return {};
  }
  if (res->status != 200) {
    throw ServiceError(
        fmt::format("paraphraser returned HTTP {}", res->status));
  }
  try {
    return json::parse(res->body).at("paraphrases").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ServiceError(std::string("malformed paraphrase response: ") +
                       e.what());
  }
}

}  // namespace faceval
