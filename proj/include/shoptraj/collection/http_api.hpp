// Copyright 2026 The shoptraj Authors
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


#ifndef SHOPTRAJ_COLLECTION_HTTP_API_HPP_
#define SHOPTRAJ_COLLECTION_HTTP_API_HPP_

#include <filesystem>
#include <string>

#include "shoptraj/collection/session_store.hpp"

namespace httplib
{
class Server;
}

namespace shoptraj::collection
{

/// HTTP status for a SessionError code.
int status_for(const std::string & code);

/**
 * @brief Installs the collection routes on `server`.
 *
 *   GET  /maps                      GET /maps/{id}
 *   GET  /assignments/{participant}
 *   POST /sessions                  GET /sessions/{id}
 *   POST /sessions/{id}/events      POST /sessions/{id}/complete
 *   GET  /export?map_id=&map_label=&caption_source=&include_pilot=&format=jsonl
 *
 * Errors are {"error": <code>, "message": <text>}. When `static_dir` exists
 * it is served under /app.
 */
void register_routes(httplib::Server & server, SessionStore & store, const std::filesystem::path & static_dir = {});

}  // namespace shoptraj::collection

#endif  // SHOPTRAJ_COLLECTION_HTTP_API_HPP_
