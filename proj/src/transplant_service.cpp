// Copyright 2026 The LitterKit Authors
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

#include "litterkit/transplant_service.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "litterkit/error.hpp"
#include "litterkit/mask_ops.hpp"

namespace litterkit
{

using nlohmann::json;

TransplantRequest parse_transplant_request(const json & j)
{
  TransplantRequest r;
  try {
    r.annotation_id = j.at("annotation_id").get<std::int64_t>();
    r.target_image_id = j.at("target_image_id").get<std::int64_t>();
    const json & p = j.at("placement");
    r.placement.x = p.at("x").get<int>();
    r.placement.y = p.at("y").get<int>();
    r.placement.scale = p.value("scale", 1.0);
    r.placement.rotation = p.value("rotation", 0.0);
    r.placement.soft = p.value("soft", true);
    r.placement.radius = p.value("radius", kDefaultSoftRadius);
  } catch (const json::exception & e) {
    throw InvalidArgument(std::string("bad transplant request: ") + e.what());
  }
  return r;
}

json to_json(const TransplantRequest & r)
{
  const Placement & p = r.placement;
  return {
    {"annotation_id", r.annotation_id},
    {"target_image_id", r.target_image_id},
    {"placement",
     {{"x", p.x}, {"y", p.y}, {"scale", p.scale}, {"rotation", p.rotation}, {"soft", p.soft}, {"radius", p.radius}}}};
}

TransplantService::TransplantService(Dataset dataset, ImageLoader loader, ServiceOptions options)
: dataset_(std::move(dataset)), loader_(std::move(loader)), options_(std::move(options))
{
  const ValidationReport report = validate(dataset_);
  if (!report.ok()) {
    const Violation & v = report.violations.front();
    throw InvalidArgument(
      "dataset has " + std::to_string(report.violations.size()) + " violations, first: " + v.entity + " " +
      std::to_string(v.id) + " " + v.rule);
  }
}

Image TransplantService::current_image(std::int64_t image_id) const
{
  if (const auto it = edited_.find(image_id); it != edited_.end()) {
    return it->second;
  }
  const ImageRecord * rec = dataset_.find_image(image_id);
  if (rec == nullptr) {
    throw IntegrityError("image", image_id, "request");
  }
  Image img = loader_(*rec);
  if (img.width != rec->width || img.height != rec->height) {
    throw InvalidArgument("image " + std::to_string(image_id) + " does not match its recorded size");
  }
  return img;
}

json TransplantService::images() const
{
  std::shared_lock lock(mutex_);
  json out = json::array();
  for (const auto & img : dataset_.images) {
    out.push_back(
      {{"id", img.id},
       {"file_name", img.file_name},
       {"width", img.width},
       {"height", img.height},
       {"edited", edited_.count(img.id) > 0}});
  }
  return out;
}

std::vector<std::uint8_t> TransplantService::image_file(std::int64_t image_id) const
{
  std::shared_lock lock(mutex_);
  return encode_png(current_image(image_id));
}

json TransplantService::annotations(const std::optional<std::string> & category) const
{
  std::shared_lock lock(mutex_);
  json out = json::array();
  for (const auto & a : dataset_.annotations) {
    const Category * c = dataset_.find_category(a.category_id);
    std::string mapped;
    if (options_.mapping) {
      if (const auto it = options_.mapping->entries.find(a.category_id); it != options_.mapping->entries.end()) {
        mapped = it->second;
      }
    }
    if (category && c->name != *category && c->supercategory != *category && mapped != *category) {
      continue;
    }
    json entry = {
      {"id", a.id},
      {"image_id", a.image_id},
      {"category_id", a.category_id},
      {"category", c->name},
      {"supercategory", c->supercategory},
      {"bbox", {a.bbox.x, a.bbox.y, a.bbox.w, a.bbox.h}},
      {"area", a.area}};
    if (options_.mapping) {
      entry["class"] = mapped;
    }
    out.push_back(std::move(entry));
  }
  return out;
}

std::vector<std::uint8_t> TransplantService::crop(std::int64_t annotation_id) const
{
  std::shared_lock lock(mutex_);
  const Annotation * a = dataset_.find_annotation(annotation_id);
  if (a == nullptr) {
    throw IntegrityError("annotation", annotation_id, "crop");
  }
  const Image src = current_image(a->image_id);
  const LocalMask m = rasterize_local(a->segmentation, src.width, src.height);
  const int w = m.rect.x1 - m.rect.x0;
  const int h = m.rect.y1 - m.rect.y0;
  if (w <= 0 || h <= 0) {
    throw InvalidArgument("annotation " + std::to_string(annotation_id) + " has an empty mask");
  }
  Image out(w, h, 4);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < 3; ++c) {
        out.at(x, y, c) = src.at(m.rect.x0 + x, m.rect.y0 + y, std::min(c, src.channels - 1));
      }
      out.at(x, y, 3) = m.mask.bits[static_cast<std::size_t>(y) * w + x] ? 255 : 0;
    }
  }
  return encode_png(out);
}

TransplantResult TransplantService::render(const TransplantRequest & request) const
{
  const Annotation * a = dataset_.find_annotation(request.annotation_id);
  if (a == nullptr) {
    throw IntegrityError("annotation", request.annotation_id, "transplant");
  }
  const Image src = current_image(a->image_id);
  const Image dst = current_image(request.target_image_id);
  return transplant_one(src, *a, dst, request.placement);
}

std::vector<std::uint8_t> TransplantService::preview(const TransplantRequest & request) const
{
  std::shared_lock lock(mutex_);
  return encode_png(render(request).image);
}

std::int64_t TransplantService::commit(const TransplantRequest & request)
{
  std::unique_lock lock(mutex_);
  TransplantResult result = render(request);
  std::int64_t next_id = 1;
  for (const auto & a : dataset_.annotations) {
    next_id = std::max(next_id, a.id + 1);
  }
  result.annotation.id = next_id;
  result.annotation.image_id = request.target_image_id;
  dataset_.annotations.push_back(std::move(result.annotation));
  edited_[request.target_image_id] = std::move(result.image);
  return next_id;
}

std::string TransplantService::export_annotations()
{
  std::unique_lock lock(mutex_);
  Dataset out = dataset_;
  if (!options_.export_dir.empty()) {
    std::filesystem::create_directories(options_.export_dir);
    for (auto & rec : out.images) {
      const auto it = edited_.find(rec.id);
      if (it == edited_.end()) {
        continue;
      }
      const std::string name = std::filesystem::path(rec.file_name).stem().string() + "_transplant.png";
      write_png(it->second, options_.export_dir / name);
      rec.file_name = name;
    }
  }
  std::string text = serialize_dataset(out);
  if (!options_.export_dir.empty()) {
    std::ofstream(options_.export_dir / "annotations.json", std::ios::binary) << text;
  }
  return text;
}

Dataset TransplantService::working_set() const
{
  std::shared_lock lock(mutex_);
  return dataset_;
}

namespace
{

void send_json(httplib::Response & res, int status, const json & body)
{
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_png(httplib::Response & res, const std::vector<std::uint8_t> & png)
{
  res.status = 200;
  res.set_content(std::string(png.begin(), png.end()), "image/png");
}

std::int64_t path_id(const httplib::Request & req)
{
  try {
    return std::stoll(req.matches[1].str());
  } catch (const std::exception &) {
    throw InvalidArgument("bad id in path");
  }
}

// Runs a handler and maps toolkit errors onto HTTP status codes.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn)
{
  return [fn](const httplib::Request & req, httplib::Response & res) {
    try {
      fn(req, res);
    } catch (const IntegrityError & e) {
      send_json(res, 404, {{"error", e.what()}});
    } catch (const json::exception & e) {
      send_json(res, 400, {{"error", e.what()}});
    } catch (const Error & e) {
      send_json(res, 400, {{"error", e.what()}});
    } catch (const std::exception & e) {
      send_json(res, 500, {{"error", e.what()}});
    }
  };
}

}  // namespace

struct TransplantServer::Impl
{
  TransplantService & service;
  httplib::Server server;
  std::thread thread;
  int port = 0;
};

TransplantServer::TransplantServer(TransplantService & service) : impl_(new Impl{service, {}, {}, 0})
{
  auto & srv = impl_->server;
  TransplantService & svc = service;
  // httplib defaults to SO_REUSEPORT, which lets a second server share a busy
  // port silently. Plain SO_REUSEADDR still allows quick restarts.
  srv.set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char *>(&yes), sizeof(yes));
  });

  srv.Get("/images", guarded([&svc](const httplib::Request &, httplib::Response & res) {
    send_json(res, 200, svc.images());
  }));
  srv.Get(R"(/images/(-?\d+)/file)", guarded([&svc](const httplib::Request & req, httplib::Response & res) {
    send_png(res, svc.image_file(path_id(req)));
  }));
  srv.Get("/annotations", guarded([&svc](const httplib::Request & req, httplib::Response & res) {
    std::optional<std::string> category;
    if (req.has_param("category")) {
      category = req.get_param_value("category");
    }
    send_json(res, 200, svc.annotations(category));
  }));
  srv.Get(R"(/annotations/(-?\d+)/crop)", guarded([&svc](const httplib::Request & req, httplib::Response & res) {
    send_png(res, svc.crop(path_id(req)));
  }));
  srv.Post("/preview", guarded([&svc](const httplib::Request & req, httplib::Response & res) {
    send_png(res, svc.preview(parse_transplant_request(json::parse(req.body))));
  }));
  srv.Post("/commit", guarded([&svc](const httplib::Request & req, httplib::Response & res) {
    const std::int64_t id = svc.commit(parse_transplant_request(json::parse(req.body)));
    send_json(res, 200, {{"annotation_id", id}});
  }));
  srv.Get("/export", guarded([&svc](const httplib::Request &, httplib::Response & res) {
    res.status = 200;
    res.set_header("Content-Disposition", "attachment; filename=\"annotations.json\"");
    res.set_content(svc.export_annotations(), "application/json");
  }));
}

TransplantServer::~TransplantServer()
{
  stop();
}

int TransplantServer::start(const std::string & host, int port)
{
  auto & srv = impl_->server;
  if (port == 0) {
    impl_->port = srv.bind_to_any_port(host);
  } else {
    impl_->port = srv.bind_to_port(host, port) ? port : -1;
  }
  if (impl_->port <= 0) {
    throw Error("cannot bind " + host + ":" + std::to_string(port) + " (port busy?)");
  }
  impl_->thread = std::thread([&srv] { srv.listen_after_bind(); });
  srv.wait_until_ready();
  return impl_->port;
}

void TransplantServer::wait()
{
  if (impl_->thread.joinable()) {
    impl_->thread.join();
  }
}

void TransplantServer::stop()
{
  if (impl_->server.is_running()) {
    impl_->server.stop();
  }
  wait();
}

int TransplantServer::port() const
{
  return impl_->port;
}

}  // namespace litterkit
