#ifndef TERMTOPICS_HTTP_SERVER_HPP
#define TERMTOPICS_HTTP_SERVER_HPP

// Eigen must come before httplib: <resolv.h> defines a `_res` macro that
// collides with Eigen parameter names.
#include "termtopics/service.hpp"

#include <httplib.h>

namespace termtopics {

/// Registers the JSON API routes of `service` on `server`. Errors map to
/// 400 (validation, ingest), 404 (not found), 409 (conflict) and 500, each
/// with a `{"error": ...}` body.
void configure_routes(httplib::Server& server, TopicService& service);

/// Blocks serving on host:port until the server is stopped.
void serve(TopicService& service, const std::string& host, int port);

} // namespace termtopics

#endif // TERMTOPICS_HTTP_SERVER_HPP
