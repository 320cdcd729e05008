/*
 * Copyright 2026 The MAFUS Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MAFUS_SERVICE_H_
#define MAFUS_SERVICE_H_

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "mafus/artifact.h"

namespace mafus::service {

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Request handling over one immutable artifact. handle() has no side effects
// and may be called from many threads.
class Service {
 public:
  // No artifact: every endpoint but /healthz answers 503.
  Service() = default;
  // `artifact_bytes` is the serialized form; its hash tags every response.
  Service(ModelArtifact artifact, std::string_view artifact_bytes);
  static Service from_file(const std::filesystem::path& path);

  bool loaded() const { return artifact_ != nullptr; }
  const std::string& artifact_hash() const { return hash_; }
  const ModelArtifact* artifact() const { return artifact_.get(); }

  Response handle(std::string_view method, std::string_view path, std::string_view body) const;

 private:
  std::shared_ptr<const ModelArtifact> artifact_;
  std::string hash_;
};

// Serves `service` over HTTP until the process is stopped. Returns false if
// the port could not be bound.
bool serve(const Service& service, const std::string& host, int port);

}  // namespace mafus::service

#endif  // MAFUS_SERVICE_H_
