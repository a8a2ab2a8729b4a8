// Command-line front end: group registry listing, quotient queries, orbit
// graphs, invariant Fourier bases, orbifold embeddings, Gaussian-process
// sampling and SVM demos. Every artifact embeds the resolved configuration:
// JSON files carry a "config" object, CSV and OFF files start with a
// "# config {...}" comment line. Identical configuration and seed reproduce
// every output byte for byte.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "crystalfold/domain.hpp"
#include "crystalfold/embed.hpp"
#include "crystalfold/io.hpp"
#include "crystalfold/ml.hpp"
#include "crystalfold/orbitgraph.hpp"
#include "crystalfold/quotient.hpp"
#include "crystalfold/registry.hpp"
#include "crystalfold/rng.hpp"
#include "crystalfold/spectral.hpp"

namespace {

using crystalfold::ConvexPolytope;
using crystalfold::CrystalGroup;
using crystalfold::Embedding;
using crystalfold::QuotientContext;
using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// small formatting / parsing helpers

std::string short_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string full_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Eigen::VectorXd parse_point(const std::string& text, int dimension) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string field;
    while (std::getline(stream, field, ',')) {
        size_t used = 0;
        values.push_back(std::stod(field, &used));
        if (used != field.size()) throw std::invalid_argument("bad coordinate \"" + field + "\"");
    }
    if (static_cast<int>(values.size()) != dimension) {
        std::ostringstream msg;
        msg << "point \"" << text << "\": expected " << dimension
            << " comma-separated coordinates, got " << values.size();
        throw std::invalid_argument(msg.str());
    }
    Eigen::VectorXd x(dimension);
    for (int i = 0; i < dimension; ++i) x(i) = values[static_cast<size_t>(i)];
    return x;
}

std::string format_point(const Eigen::VectorXd& x) {
    std::string out;
    for (int i = 0; i < x.size(); ++i) {
        if (i) out += ",";
        out += short_number(x(i));
    }
    return out;
}

// "auto" keeps the module default (1.5 x grid spacing); anything else must be
// a positive number.
double parse_delta(const std::string& raw) {
    if (raw == "auto") return 0.0;
    size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(raw, &used);
    } catch (const std::exception&) {
        used = std::string::npos;
    }
    if (used != raw.size() || value <= 0.0) {
        throw std::invalid_argument("--delta must be \"auto\" or a positive number, got \"" +
                                    raw + "\"");
    }
    return value;
}

std::vector<std::string> csv_columns(int dimension) {
    switch (dimension) {
        case 1: return {"x"};
        case 2: return {"x", "y"};
        default: return {"x", "y", "z"};
    }
}

// ---------------------------------------------------------------------------
// artifact writers

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path);
}

void write_json_artifact(const std::string& path, const ordered_json& doc) {
    write_text(path, doc.dump(2) + "\n");
}

// Rows of point coordinates plus one value column, preceded by the config
// comment and a header naming the columns.
void write_csv_artifact(const std::string& path, const ordered_json& config,
                        const std::vector<Eigen::VectorXd>& points,
                        const Eigen::VectorXd& values, const std::string& value_name) {
    if (static_cast<Eigen::Index>(points.size()) != values.size()) {
        throw std::logic_error("csv writer: point/value count mismatch");
    }
    std::string body = "# config " + config.dump() + "\n";
    const int dim = points.empty() ? 0 : static_cast<int>(points.front().size());
    for (const std::string& column : csv_columns(dim)) body += column + ",";
    body += value_name + "\n";
    for (size_t r = 0; r < points.size(); ++r) {
        for (int c = 0; c < dim; ++c) body += full_number(points[r](c)) + ",";
        body += full_number(values(static_cast<Eigen::Index>(r))) + "\n";
    }
    write_text(path, body);
}

// OFF mesh: first three embedding coordinates (zero-padded below dimension 3)
// with graph edges as degenerate two-vertex faces, digestible by standard
// mesh viewers.
void write_off_artifact(const std::string& path, const ordered_json& config,
                        const Eigen::MatrixXd& coordinates,
                        const std::vector<std::pair<int, int>>& edges) {
    std::string body = "OFF\n# config " + config.dump() + "\n";
    body += std::to_string(coordinates.rows()) + " " + std::to_string(edges.size()) + " 0\n";
    for (Eigen::Index r = 0; r < coordinates.rows(); ++r) {
        for (int c = 0; c < 3; ++c) {
            if (c) body += " ";
            body += full_number(c < coordinates.cols() ? coordinates(r, c) : 0.0);
        }
        body += "\n";
    }
    for (const auto& [i, j] : edges) {
        body += "2 " + std::to_string(i) + " " + std::to_string(j) + "\n";
    }
    write_text(path, body);
}

std::string sibling_path(const std::string& out, const std::string& suffix) {
    std::filesystem::path p(out);
    p.replace_extension();
    return p.string() + suffix;
}

// ---------------------------------------------------------------------------
// shared pipeline pieces

void warn_if_rebased(const Embedding& embedding, const std::string& group_name) {
    if (embedding.rebased) {
        std::cerr << "note: " << group_name
                  << ": stored polytope does not glue exactly; re-based onto a Dirichlet "
                     "domain for the embedding\n";
    }
}

std::vector<std::pair<int, int>> undirected_edges(const crystalfold::OrbitGraph& graph) {
    std::vector<std::pair<int, int>> out;
    for (const auto& e : graph.edges) {
        if (e.i < e.j) out.emplace_back(e.i, e.j);
    }
    return out;
}

// Uniform draws inside the domain: per attempt one unit value per axis from
// the counter-based stream, mapped over the bounding box and rejected when
// outside. Deterministic in the seed.
std::vector<Eigen::VectorXd> sample_domain_points(const ConvexPolytope& domain,
                                                  std::uint64_t seed, std::uint64_t stream,
                                                  int count) {
    const int n = domain.dimension();
    Eigen::VectorXd lo = domain.vertices().front();
    Eigen::VectorXd hi = lo;
    for (const Eigen::VectorXd& v : domain.vertices()) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    std::vector<Eigen::VectorXd> points;
    for (std::uint64_t attempt = 0; static_cast<int>(points.size()) < count; ++attempt) {
        if (attempt > 1000ull * static_cast<std::uint64_t>(count)) {
            throw std::runtime_error("domain sampling failed to hit the polytope");
        }
        Eigen::VectorXd x(n);
        for (int d = 0; d < n; ++d) {
            const double u = crystalfold::rng_unit(seed, stream,
                                                   attempt * static_cast<std::uint64_t>(n) +
                                                       static_cast<std::uint64_t>(d));
            x(d) = lo(d) + u * (hi(d) - lo(d));
        }
        if (domain.contains(x)) points.push_back(x);
    }
    return points;
}

ordered_json json_vector(const Eigen::VectorXd& v) {
    ordered_json out = ordered_json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

ordered_json json_points(const std::vector<Eigen::VectorXd>& points) {
    ordered_json out = ordered_json::array();
    for (const auto& p : points) out.push_back(json_vector(p));
    return out;
}

ordered_json json_matrix_rows(const Eigen::MatrixXd& m) {
    ordered_json out = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(row);
    }
    return out;
}

// ---------------------------------------------------------------------------
// subcommand options

struct GroupsOptions {};

struct ProjectOptions {
    std::string group;
    std::string point;
};

struct DistanceOptions {
    std::string group;
    std::string a;
    std::string b;
};

struct OrbitGraphOptions {
    std::string group;
    double epsilon = 0.05;
    std::string delta = "auto";
    std::string out;
    std::string off;
};

struct BasisOptions {
    std::string group;
    std::string method = "spectral";
    int k = 6;
    double epsilon = 0.05;
    std::string delta = "auto";
    int raster = 32;
    int centers = 15;
    int quad_cells = 32;
    double rbf_width = 0.0;
    double prune_gap = 0.0;
    std::string out;
};

struct EmbedOptions {
    std::string group;
    double epsilon = 0.05;
    std::string delta = "auto";
    double stress_tol = 0.05;
    bool keep_domain = false;
    std::string out;
    std::string off;
};

struct GpOptions {
    std::string group;
    double epsilon = 0.1;
    double lengthscale = 0.1;
    int features = 1024;
    std::uint64_t seed = 0;
    int raster = 64;
    std::string out;
};

struct SvmOptions {
    std::string group;
    double epsilon = 0.1;
    double lengthscale = 0.3;
    double regularization = 10.0;
    std::string data;
    int train_count = 200;
    std::uint64_t seed = 0;
    int raster = 64;
    std::string out;
};

// ---------------------------------------------------------------------------
// subcommands

void cmd_groups() {
    std::printf("%-8s %-4s %-11s %s\n", "name", "dim", "generators", "exact");
    for (const std::string& name : crystalfold::builtin_group_names()) {
        const CrystalGroup group = crystalfold::builtin_group(name);
        std::printf("%-8s %-4d %-11zu %s\n", group.name.c_str(), group.dimension,
                    group.generators.size(), crystalfold::is_exact(group) ? "yes" : "no");
    }
}

void cmd_project(const ProjectOptions& opt) {
    const QuotientContext ctx = crystalfold::make_context(crystalfold::resolve_group(opt.group));
    const Eigen::VectorXd x = parse_point(opt.point, ctx.group.dimension);
    std::printf("%s\n", format_point(crystalfold::project(ctx, x)).c_str());
}

void cmd_distance(const DistanceOptions& opt) {
    const QuotientContext ctx = crystalfold::make_context(crystalfold::resolve_group(opt.group));
    const Eigen::VectorXd a = parse_point(opt.a, ctx.group.dimension);
    const Eigen::VectorXd b = parse_point(opt.b, ctx.group.dimension);
    std::printf("%s\n", full_number(crystalfold::quotient_distance(ctx, a, b)).c_str());
}

void cmd_orbitgraph(const OrbitGraphOptions& opt) {
    const QuotientContext ctx = crystalfold::make_context(crystalfold::resolve_group(opt.group));
    double delta = parse_delta(opt.delta);
    if (delta == 0.0) delta = crystalfold::default_delta(ctx.group.domain, opt.epsilon);
    const crystalfold::OrbitGraph graph = crystalfold::build_orbit_graph(ctx, opt.epsilon, delta);

    ordered_json config{{"command", "orbitgraph"},
                        {"group", ctx.group.name},
                        {"epsilon", opt.epsilon},
                        {"delta_mode", opt.delta},
                        {"delta", delta},
                        {"out", opt.out}};
    ordered_json doc{{"config", config},
                     {"epsilon", graph.epsilon},
                     {"delta", graph.delta},
                     {"vertex_count", graph.vertices.size()},
                     {"vertices", json_points(graph.vertices)}};
    ordered_json edges = ordered_json::array();
    for (const auto& e : graph.edges) {
        if (e.i < e.j) edges.push_back(ordered_json::array({e.i, e.j, e.weight}));
    }
    doc["edge_count"] = edges.size();
    doc["edges"] = std::move(edges);
    write_json_artifact(opt.out, doc);

    if (!opt.off.empty()) {
        Eigen::MatrixXd coords(graph.vertices.size(), ctx.group.dimension);
        for (size_t r = 0; r < graph.vertices.size(); ++r) {
            coords.row(static_cast<Eigen::Index>(r)) = graph.vertices[r];
        }
        write_off_artifact(opt.off, config, coords, undirected_edges(graph));
    }
    std::printf("orbitgraph: %zu vertices, %zu undirected edges -> %s\n", graph.vertices.size(),
                undirected_edges(graph).size(), opt.out.c_str());
}

void cmd_basis(const BasisOptions& opt) {
    const QuotientContext ctx = crystalfold::make_context(crystalfold::resolve_group(opt.group));
    if (opt.method != "spectral" && opt.method != "galerkin") {
        throw std::invalid_argument("--method must be spectral or galerkin");
    }

    ordered_json config{{"command", "basis"},         {"group", ctx.group.name},
                        {"method", opt.method},       {"k", opt.k},
                        {"epsilon", opt.epsilon},     {"delta_mode", opt.delta},
                        {"raster", opt.raster},       {"out", opt.out}};

    crystalfold::EigenBasis basis;
    const QuotientContext* eval_ctx = &ctx;
    Embedding embedding;  // galerkin only
    if (opt.method == "spectral") {
        double delta = parse_delta(opt.delta);
        if (delta == 0.0) delta = crystalfold::default_delta(ctx.group.domain, opt.epsilon);
        config["delta"] = delta;
        const crystalfold::OrbitGraph graph =
            crystalfold::build_orbit_graph(ctx, opt.epsilon, delta);
        const crystalfold::OrbitGraph augmented = crystalfold::mirror_augment(ctx, graph);
        basis = crystalfold::eigenbasis_spectral(ctx, augmented, opt.k);
    } else {
        embedding = crystalfold::build_embedding(ctx, opt.epsilon, parse_delta(opt.delta));
        warn_if_rebased(embedding, ctx.group.name);
        eval_ctx = &embedding.context;
        const ConvexPolytope& domain = embedding.context.group.domain;
        std::vector<Eigen::VectorXd> centers = crystalfold::make_centers(domain, opt.centers);
        if (opt.prune_gap > 0.0) {
            centers = crystalfold::prune_centers(embedding, centers, opt.prune_gap);
        }
        crystalfold::GalerkinConfig cfg;
        cfg.centers = std::move(centers);
        cfg.rbf_width = opt.rbf_width;
        cfg.quadrature = crystalfold::make_quadrature(domain, opt.quad_cells);
        basis = crystalfold::eigenbasis_galerkin(embedding.context, embedding, cfg, opt.k);
        config["delta"] = embedding.delta;
        config["centers_per_axis"] = opt.centers;
        config["center_count"] = cfg.centers.size();
        config["quad_cells_per_axis"] = opt.quad_cells;
        config["rbf_width"] = basis.rbf_sigma;
        config["prune_gap"] = opt.prune_gap;
        config["rebased"] = embedding.rebased;
    }

    ordered_json doc{{"config", config},
                     {"method", opt.method},
                     {"eigenvalues", json_vector(basis.eigenvalues)},
                     {"sample_count", basis.sample_points.size()}};
    ordered_json clusters = ordered_json::array();
    for (const auto& cluster : basis.clusters) clusters.push_back(cluster);
    doc["clusters"] = std::move(clusters);
    write_json_artifact(opt.out, doc);

    // One raster CSV per basis function for plotting.
    const std::vector<Eigen::VectorXd> raster =
        crystalfold::make_centers(eval_ctx->group.domain, opt.raster);
    Eigen::MatrixXd values(static_cast<Eigen::Index>(raster.size()), opt.k);
    for (size_t r = 0; r < raster.size(); ++r) {
        if (opt.method == "spectral") {
            values.row(static_cast<Eigen::Index>(r)) =
                crystalfold::interpolate_all(ctx, basis, raster[r]);
        } else {
            for (int i = 0; i < opt.k; ++i) {
                values(static_cast<Eigen::Index>(r), i) =
                    crystalfold::galerkin_eval(embedding, basis, i, raster[r]);
            }
        }
    }
    for (int i = 0; i < opt.k; ++i) {
        write_csv_artifact(sibling_path(opt.out, "_e" + std::to_string(i) + ".csv"), config,
                           raster, values.col(i), "value");
    }
    std::printf("basis: %d eigenvalues, first nonconstant %s -> %s\n", opt.k,
                short_number(basis.eigenvalues(std::min<Eigen::Index>(1, opt.k - 1))).c_str(),
                opt.out.c_str());
}

void cmd_embed(const EmbedOptions& opt) {
    const QuotientContext ctx = crystalfold::make_context(crystalfold::resolve_group(opt.group));
    const Embedding emb = crystalfold::build_embedding(ctx, opt.epsilon, parse_delta(opt.delta),
                                                       opt.stress_tol, opt.keep_domain);
    warn_if_rebased(emb, ctx.group.name);

    ordered_json config{{"command", "embed"},
                        {"group", ctx.group.name},
                        {"epsilon", opt.epsilon},
                        {"delta_mode", opt.delta},
                        {"delta", emb.delta},
                        {"stress_tol", opt.stress_tol},
                        {"keep_domain", opt.keep_domain},
                        {"out", opt.out}};
    ordered_json doc{{"config", config},
                     {"dimension", emb.dimension},
                     {"dimension_bound", emb.dimension_bound},
                     {"exceeds_bound", emb.exceeds_bound},
                     {"rebased", emb.rebased},
                     {"stress", emb.stress},
                     {"stress_profile", emb.stress_profile},
                     {"gluing_residual", emb.gluing_residual},
                     {"mds_eigenvalues", json_vector(emb.mds_eigenvalues)},
                     {"net", json_points(emb.net)},
                     {"coordinates", json_matrix_rows(emb.coordinates)}};
    write_json_artifact(opt.out, doc);

    // The graph is rebuilt deterministically over the stored context, so edge
    // indices line up with the embedded net.
    const crystalfold::OrbitGraph graph =
        crystalfold::build_orbit_graph(emb.context, emb.epsilon, emb.delta);
    const std::string off = opt.off.empty() ? sibling_path(opt.out, ".off") : opt.off;
    write_off_artifact(off, config, emb.coordinates, undirected_edges(graph));
    std::printf("embed: dimension %d, stress %s, gluing residual %s -> %s\n", emb.dimension,
                short_number(emb.stress).c_str(), short_number(emb.gluing_residual).c_str(),
                opt.out.c_str());
}

void cmd_gp(const GpOptions& opt) {
    const QuotientContext ctx = crystalfold::make_context(crystalfold::resolve_group(opt.group));
    const Embedding emb = crystalfold::build_embedding(ctx, opt.epsilon);
    warn_if_rebased(emb, ctx.group.name);
    const crystalfold::GPSampler sampler =
        crystalfold::make_gp_sampler(emb, opt.lengthscale, opt.features, opt.seed);

    const std::vector<Eigen::VectorXd> raster =
        crystalfold::make_centers(emb.context.group.domain, opt.raster);
    const Eigen::VectorXd values = crystalfold::gp_sample_grid(sampler, raster);

    ordered_json config{{"command", "gp-sample"},
                        {"group", ctx.group.name},
                        {"epsilon", opt.epsilon},
                        {"lengthscale", opt.lengthscale},
                        {"features", opt.features},
                        {"seed", opt.seed},
                        {"raster", opt.raster},
                        {"out", opt.out}};
    write_csv_artifact(opt.out, config, raster, values, "value");
    std::printf("gp-sample: %zu raster points -> %s\n", raster.size(), opt.out.c_str());
}

// Reads "x,y[,z],label" rows; '#' comments and a header line are skipped.
void load_labeled_csv(const std::string& path, int dimension,
                      std::vector<Eigen::VectorXd>* points, std::vector<int>* labels) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path + " for reading");
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream row(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(row, field, ',')) fields.push_back(field);
        if (static_cast<int>(fields.size()) != dimension + 1) {
            throw std::invalid_argument(path + ": expected " + std::to_string(dimension + 1) +
                                        " columns, got line \"" + line + "\"");
        }
        try {
            Eigen::VectorXd x(dimension);
            for (int d = 0; d < dimension; ++d) x(d) = std::stod(fields[static_cast<size_t>(d)]);
            const double raw = std::stod(fields.back());
            if (raw != 1.0 && raw != -1.0) {
                throw std::invalid_argument(path + ": labels must be +1 or -1, got \"" +
                                            fields.back() + "\"");
            }
            points->push_back(std::move(x));
            labels->push_back(raw > 0 ? 1 : -1);
        } catch (const std::invalid_argument& err) {
            // A non-numeric first row is a header; anything later is an error.
            if (points->empty() && std::string(err.what()).find("labels must") == std::string::npos)
                continue;
            throw;
        }
    }
    if (points->empty()) throw std::invalid_argument(path + ": no data rows");
}

void cmd_svm(const SvmOptions& opt) {
    const QuotientContext ctx = crystalfold::make_context(crystalfold::resolve_group(opt.group));
    const Embedding emb = crystalfold::build_embedding(ctx, opt.epsilon);
    warn_if_rebased(emb, ctx.group.name);
    const crystalfold::InvariantKernel kernel = crystalfold::make_rbf_kernel(emb, opt.lengthscale);

    ordered_json config{{"command", "svm"},
                        {"group", ctx.group.name},
                        {"epsilon", opt.epsilon},
                        {"lengthscale", opt.lengthscale},
                        {"regularization", opt.regularization},
                        {"seed", opt.seed},
                        {"raster", opt.raster},
                        {"out", opt.out}};

    std::vector<Eigen::VectorXd> points;
    std::vector<int> labels;
    if (!opt.data.empty()) {
        load_labeled_csv(opt.data, ctx.group.dimension, &points, &labels);
        config["data"] = opt.data;
    } else {
        // Self-generated instance: uniform points in the domain, labeled by
        // the sign of an invariant Gaussian-process sample with the same
        // length scale (256 random features), everything derived from --seed.
        points = sample_domain_points(emb.context.group.domain, opt.seed, 10, opt.train_count);
        const crystalfold::GPSampler labeler =
            crystalfold::make_gp_sampler(emb, opt.lengthscale, 256, opt.seed);
        Eigen::VectorXd field = crystalfold::gp_sample_grid(labeler, points);
        labels.reserve(points.size());
        for (Eigen::Index i = 0; i < field.size(); ++i) labels.push_back(field(i) > 0 ? 1 : -1);
        config["data"] = "generated";
        config["train_count"] = opt.train_count;

        Eigen::VectorXd label_column(field.size());
        for (Eigen::Index i = 0; i < field.size(); ++i) {
            label_column(i) = labels[static_cast<size_t>(i)];
        }
        write_csv_artifact(sibling_path(opt.out, "_data.csv"), config, points, label_column,
                           "label");
    }

    const crystalfold::SVMModel model =
        crystalfold::svm_train(kernel, points, labels, opt.regularization);
    int correct = 0;
    for (size_t i = 0; i < points.size(); ++i) {
        const double f = crystalfold::svm_predict(model, points[i]);
        if ((f > 0 ? 1 : -1) == labels[i]) ++correct;
    }

    const std::vector<Eigen::VectorXd> raster =
        crystalfold::make_centers(emb.context.group.domain, opt.raster);
    Eigen::VectorXd decision(static_cast<Eigen::Index>(raster.size()));
    for (size_t r = 0; r < raster.size(); ++r) {
        decision(static_cast<Eigen::Index>(r)) = crystalfold::svm_predict(model, raster[r]);
    }
    write_csv_artifact(opt.out, config, raster, decision, "decision");
    std::printf("svm: %zu points, %d supports, training accuracy %d/%zu, %s -> %s\n",
                points.size(), static_cast<int>(model.support_points.size()), correct,
                points.size(), model.converged ? "converged" : "iteration cap hit",
                opt.out.c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "crystalfold: numerics for functions invariant under crystallographic groups.\n"
        "Artifacts embed their resolved configuration; identical configuration and\n"
        "seed reproduce outputs byte for byte. CRYSTALFOLD_THREADS caps worker\n"
        "threads."};
    app.require_subcommand(1);

    ProjectOptions project;
    DistanceOptions distance;
    OrbitGraphOptions orbitgraph;
    BasisOptions basis;
    EmbedOptions embed;
    GpOptions gp;
    SvmOptions svm;

    app.add_subcommand("groups", "List builtin groups with the exactness of their polytope")
        ->callback([] { cmd_groups(); });

    CLI::App* sub = app.add_subcommand("project", "Canonical representative of a point's orbit");
    sub->add_option("--group,-g", project.group, "Builtin group name or group file path")
        ->required();
    sub->add_option("-x", project.point, "Point, comma-separated coordinates")->required();
    sub->callback([&] { cmd_project(project); });

    sub = app.add_subcommand("distance", "Quotient distance between two points");
    sub->add_option("--group,-g", distance.group, "Builtin group name or group file path")
        ->required();
    sub->add_option("-x", distance.a, "First point, comma-separated")->required();
    sub->add_option("-y", distance.b, "Second point, comma-separated")->required();
    sub->callback([&] { cmd_distance(distance); });

    sub = app.add_subcommand("orbitgraph", "Neighborhood graph on an epsilon-net of the domain");
    sub->add_option("--group,-g", orbitgraph.group, "Builtin group name or group file path")
        ->required();
    sub->add_option("--epsilon,-e", orbitgraph.epsilon, "Net resolution")->check(CLI::PositiveNumber);
    sub->add_option("--delta", orbitgraph.delta, "Edge radius, or \"auto\" (1.5 x grid spacing)");
    sub->add_option("--out,-o", orbitgraph.out, "Output JSON path")->required();
    sub->add_option("--off", orbitgraph.off, "Optional OFF mesh path");
    sub->callback([&] { cmd_orbitgraph(orbitgraph); });

    sub = app.add_subcommand("basis", "Invariant Fourier basis (spectral or galerkin route)");
    sub->add_option("--group,-g", basis.group, "Builtin group name or group file path")
        ->required();
    sub->add_option("--method,-m", basis.method, "spectral or galerkin");
    sub->add_option("-k", basis.k, "Number of basis functions")->check(CLI::PositiveNumber);
    sub->add_option("--epsilon,-e", basis.epsilon, "Net resolution")->check(CLI::PositiveNumber);
    sub->add_option("--delta", basis.delta, "Edge radius, or \"auto\"");
    sub->add_option("--raster", basis.raster, "Raster resolution of the per-function CSVs")
        ->check(CLI::PositiveNumber);
    sub->add_option("--centers", basis.centers, "Galerkin: RBF centers per axis")
        ->check(CLI::PositiveNumber);
    sub->add_option("--quad", basis.quad_cells, "Galerkin: quadrature cells per axis")
        ->check(CLI::PositiveNumber);
    sub->add_option("--rbf-width", basis.rbf_width, "Galerkin: RBF width (0 = auto)");
    sub->add_option("--prune-gap", basis.prune_gap,
                    "Galerkin: drop centers closer than this in the embedding (0 = keep all)");
    sub->add_option("--out,-o", basis.out, "Output JSON path")->required();
    sub->callback([&] { cmd_basis(basis); });

    sub = app.add_subcommand("embed", "Orbifold embedding of the quotient (classical MDS)");
    sub->add_option("--group,-g", embed.group, "Builtin group name or group file path")
        ->required();
    sub->add_option("--epsilon,-e", embed.epsilon, "Net resolution")->check(CLI::PositiveNumber);
    sub->add_option("--delta", embed.delta, "Edge radius, or \"auto\"");
    sub->add_option("--stress-tol", embed.stress_tol, "Dimension selection stress threshold")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--keep-domain", embed.keep_domain,
                  "Embed the stored polytope even when it does not glue exactly");
    sub->add_option("--out,-o", embed.out, "Output JSON path")->required();
    sub->add_option("--off", embed.off, "OFF mesh path (default: next to --out)");
    sub->callback([&] { cmd_embed(embed); });

    sub = app.add_subcommand("gp-sample", "Draw an invariant Gaussian-process sample on a raster");
    sub->add_option("--group,-g", gp.group, "Builtin group name or group file path")->required();
    sub->add_option("--epsilon,-e", gp.epsilon, "Embedding net resolution")
        ->check(CLI::PositiveNumber);
    sub->add_option("--lengthscale,-l", gp.lengthscale, "Kernel length scale")
        ->check(CLI::PositiveNumber);
    sub->add_option("--features", gp.features, "Random feature count")->check(CLI::PositiveNumber);
    sub->add_option("--seed,-s", gp.seed, "64-bit seed");
    sub->add_option("--raster", gp.raster, "Raster resolution")->check(CLI::PositiveNumber);
    sub->add_option("--out,-o", gp.out, "Output CSV path")->required();
    sub->callback([&] { cmd_gp(gp); });

    sub = app.add_subcommand(
        "svm", "Train an invariant-kernel SVM and raster its decision function. Without "
               "--data, training points are drawn uniformly in the domain and labeled by the "
               "sign of a seeded Gaussian-process sample (256 features, same length scale).");
    sub->add_option("--group,-g", svm.group, "Builtin group name or group file path")->required();
    sub->add_option("--epsilon,-e", svm.epsilon, "Embedding net resolution")
        ->check(CLI::PositiveNumber);
    sub->add_option("--lengthscale,-l", svm.lengthscale, "Kernel length scale")
        ->check(CLI::PositiveNumber);
    sub->add_option("--C", svm.regularization, "Soft-margin regularization")
        ->check(CLI::PositiveNumber);
    sub->add_option("--data", svm.data, "Labeled CSV (x,y[,z],label with labels +1/-1)");
    sub->add_option("--train-count", svm.train_count, "Generated instance size (without --data)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed,-s", svm.seed, "64-bit seed");
    sub->add_option("--raster", svm.raster, "Raster resolution")->check(CLI::PositiveNumber);
    sub->add_option("--out,-o", svm.out, "Output CSV path")->required();
    sub->callback([&] { cmd_svm(svm); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
