// Apache License, Version 2.0, refer to LICENSE.txt

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gridpop/chart.hpp"
#include "gridpop/errors.hpp"
#include "gridpop/numeric.hpp"
#include "gridpop/popmodel.hpp"
#include "gridpop/raster.hpp"
#include "gridpop/services.hpp"
#include "gridpop/zonal.hpp"
#include "gridpop/zones.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace gridpop;

namespace {

void write_text_file(const fs::path& path, const std::string& content)
{
    std::ofstream out(path);
    if (!out) {
        throw IoFailure("cannot open output file: " + path.string());
    }
    out << content;
    if (!out) {
        throw IoFailure("failed writing " + path.string());
    }
}

fs::path prepare_out_dir(const std::string& out)
{
    if (out.empty()) {
        throw IoFailure("--out directory is required");
    }
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
        throw IoFailure("cannot create output directory " + out + ": " +
                        ec.message());
    }
    return fs::path(out);
}

void save_manifest(const json& manifest, const fs::path& out_dir)
{
    write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

json load_manifest(const std::string& path, const std::string& command)
{
    std::ifstream in(path);
    if (!in) {
        throw IoFailure("cannot open manifest: " + path);
    }
    json manifest;
    try {
        manifest = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("manifest parse error: ") + e.what());
    }
    if (manifest.value("command", "") != command) {
        throw ParseError("manifest was recorded for command '" +
                         manifest.value("command", std::string("?")) +
                         "', not '" + command + "'");
    }
    return manifest;
}

CoverageMode parse_mode(const std::string& mode)
{
    if (mode == "center") {
        return CoverageMode::Center;
    }
    if (mode == "weighted") {
        return CoverageMode::Weighted;
    }
    throw ParseError("mode must be 'center' or 'weighted'");
}

std::vector<double> parse_number_list(const std::string& text)
{
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string tok =
          text.substr(start, comma == std::string::npos ? std::string::npos
                                                        : comma - start);
        if (!tok.empty()) {
            const auto parsed = parse_double(tok);
            if (!parsed) {
                throw ParseError("'" + tok + "' is not a number");
            }
            values.push_back(*parsed);
        }
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return values;
}

struct ClipOptions {
    std::string raster;
    std::string zones;
    std::string crs;
    std::string mode = "weighted";
    double threshold = 0.5;
    std::string out;
    std::string manifest;
};

int run_clip(ClipOptions opt)
{
    if (!opt.manifest.empty()) {
        const json m = load_manifest(opt.manifest, "clip");
        opt.raster = m.at("raster").get<std::string>();
        opt.zones = m.at("zones").get<std::string>();
        opt.crs = m.value("crs", "");
        opt.mode = m.at("mode").get<std::string>();
        opt.threshold = m.at("threshold").get<double>();
    }
    const fs::path out_dir = prepare_out_dir(opt.out);
    const Grid grid = read_ascii_grid_file(opt.raster, opt.crs);
    const ZoneSet zones = read_geojson_zones_file(opt.zones);
    if (!crs_compatible(grid.crs_tag(), zones.crs_tag())) {
        throw CrsMismatch("raster CRS '" + grid.crs_tag() +
                          "' does not match zone CRS '" + zones.crs_tag() +
                          "'");
    }

    const Grid clipped = clip_by_mask(grid, all_parts(zones),
                                      parse_mode(opt.mode), opt.threshold);
    write_ascii_grid_file(clipped, out_dir / "clipped.asc");

    std::size_t retained = 0;
    for (double v : clipped.values()) {
        if (!clipped.is_nodata(v)) {
            ++retained;
        }
    }
    json manifest;
    manifest["command"] = "clip";
    manifest["raster"] = opt.raster;
    manifest["zones"] = opt.zones;
    manifest["crs"] = opt.crs;
    manifest["mode"] = opt.mode;
    manifest["threshold"] = opt.threshold;
    manifest["results"] = { { "cells_retained", retained },
                            { "population_total", clipped.total() } };
    save_manifest(manifest, out_dir);
    return 0;
}

struct ZonalCmdOptions {
    std::string raster;
    std::string zones;
    std::string crs;
    std::string mode = "weighted";
    double threshold = 0.5;
    bool clip_to_zones = false;
    std::string out;
    std::string manifest;
};

int run_zonal(ZonalCmdOptions opt)
{
    if (!opt.manifest.empty()) {
        const json m = load_manifest(opt.manifest, "zonal");
        opt.raster = m.at("raster").get<std::string>();
        opt.zones = m.at("zones").get<std::string>();
        opt.crs = m.value("crs", "");
        opt.mode = m.at("mode").get<std::string>();
        opt.threshold = m.at("threshold").get<double>();
        opt.clip_to_zones = m.at("clip_to_zones").get<bool>();
    }
    const fs::path out_dir = prepare_out_dir(opt.out);
    Grid grid = read_ascii_grid_file(opt.raster, opt.crs);
    const ZoneSet zones = read_geojson_zones_file(opt.zones);
    const CoverageMode mode = parse_mode(opt.mode);

    if (opt.clip_to_zones) {
        grid = clip_by_mask(grid, all_parts(zones), mode, opt.threshold);
    }
    ZonalOptions zopts;
    zopts.mode = mode;
    const std::vector<ZonalRow> rows = zonal_stats(grid, zones, zopts);
    export_zonal_csv_file(rows, out_dir / "zonal.csv");

    json manifest;
    manifest["command"] = "zonal";
    manifest["raster"] = opt.raster;
    manifest["zones"] = opt.zones;
    manifest["crs"] = opt.crs;
    manifest["mode"] = opt.mode;
    manifest["threshold"] = opt.threshold;
    manifest["clip_to_zones"] = opt.clip_to_zones;
    manifest["results"] = { { "zones", rows.size() },
                            { "population_total", aggregate_total(rows) },
                            { "grid_total", grid.total() } };
    save_manifest(manifest, out_dir);
    return 0;
}

struct NeedsCmdOptions {
    std::string input;
    std::string standard = "bs6465";
    bool chart = false;
    bool split_by_gender = false;
    double male_share = 0.5;
    std::string out;
    std::string manifest;
};

int run_needs(NeedsCmdOptions opt)
{
    if (!opt.manifest.empty()) {
        const json m = load_manifest(opt.manifest, "needs");
        opt.input = m.at("input").get<std::string>();
        opt.standard = m.at("standard").get<std::string>();
        opt.chart = m.at("chart").get<bool>();
        opt.split_by_gender = m.at("split_by_gender").get<bool>();
        opt.male_share = m.at("male_share").get<double>();
    }
    if (opt.standard != "bs6465") {
        throw ParseError("unknown facility standard '" + opt.standard +
                         "' (available: bs6465)");
    }
    const fs::path out_dir = prepare_out_dir(opt.out);

    std::ifstream in(opt.input);
    if (!in) {
        throw IoFailure("cannot open zonal CSV: " + opt.input);
    }
    const std::vector<ZonalRow> zonal_rows = parse_zonal_csv(in);

    const FacilityStandard standard = FacilityStandard::bs6465();
    NeedsOptions nopts;
    nopts.split_by_gender = opt.split_by_gender;
    nopts.male_share = opt.male_share;
    const std::vector<NeedsRow> rows = needs_table(zonal_rows, standard, nopts);
    needs_csv_file(rows, out_dir / "needs.csv");
    write_text_file(out_dir / "needs_manifest.txt",
                    needs_manifest_text(standard, nopts));

    if (opt.chart) {
        std::vector<std::string> labels;
        std::vector<double> values;
        for (const NeedsRow& row : rows) {
            labels.push_back(row.ward_name);
            values.push_back(static_cast<double>(row.toilets_need));
        }
        write_text_file(
          out_dir / "needs_chart.svg",
          render_bar_chart(labels, values, "Estimated toilet need per ward"));
    }

    json manifest;
    manifest["command"] = "needs";
    manifest["input"] = opt.input;
    manifest["standard"] = opt.standard;
    manifest["chart"] = opt.chart;
    manifest["split_by_gender"] = opt.split_by_gender;
    manifest["male_share"] = opt.male_share;
    json totals;
    long long total_need = 0;
    for (const NeedsRow& row : rows) {
        total_need += row.toilets_need;
    }
    totals["wards"] = rows.size();
    totals["total_toilets_need"] = total_need;
    manifest["results"] = totals;
    save_manifest(manifest, out_dir);
    return 0;
}

struct ChartCmdOptions {
    std::string input;
    std::string column;
    std::string title;
    std::string out;
    std::string manifest;
};

int run_chart(ChartCmdOptions opt)
{
    if (!opt.manifest.empty()) {
        const json m = load_manifest(opt.manifest, "chart");
        opt.input = m.at("input").get<std::string>();
        opt.column = m.at("column").get<std::string>();
        opt.title = m.at("title").get<std::string>();
    }
    const fs::path out_dir = prepare_out_dir(opt.out);

    std::ifstream in(opt.input);
    if (!in) {
        throw IoFailure("cannot open CSV: " + opt.input);
    }
    std::string header_line;
    std::getline(in, header_line);
    if (!header_line.empty() && header_line.back() == '\r') {
        header_line.pop_back();
    }
    in.seekg(0);

    std::vector<std::string> labels;
    std::vector<double> values;
    if (header_line == kZonalCsvHeader) {
        if (opt.column.empty()) {
            opt.column = "_sum";
        }
        const auto rows = parse_zonal_csv(in);
        for (const ZonalRow& row : rows) {
            labels.push_back(row.attrs.ward_name);
            if (opt.column == "_sum") {
                values.push_back(row.stats.sum);
            } else if (opt.column == "_count") {
                values.push_back(row.stats.count);
            } else if (opt.column == "_mean") {
                values.push_back(row.stats.mean.value_or(0.0));
            } else {
                throw ParseError("unknown zonal column '" + opt.column + "'");
            }
        }
        if (opt.title.empty()) {
            opt.title = "Ward population estimates";
        }
    } else if (header_line == kNeedsCsvHeader) {
        if (opt.column.empty()) {
            opt.column = "toilets_need";
        }
        const auto rows = parse_needs_csv(in);
        for (const NeedsRow& row : rows) {
            labels.push_back(row.ward_name);
            if (opt.column == "no_of_persons") {
                values.push_back(row.no_of_persons);
            } else if (opt.column == "toilets_need") {
                values.push_back(static_cast<double>(row.toilets_need));
            } else if (opt.column == "male_units") {
                values.push_back(static_cast<double>(row.male_units));
            } else if (opt.column == "female_units") {
                values.push_back(static_cast<double>(row.female_units));
            } else {
                throw ParseError("unknown needs column '" + opt.column + "'");
            }
        }
        if (opt.title.empty()) {
            opt.title = "Estimated toilet need per ward";
        }
    } else {
        throw SchemaError("chart input must be a zonal or needs CSV");
    }

    write_text_file(out_dir / "chart.svg",
                    render_bar_chart(labels, values, opt.title));

    json manifest;
    manifest["command"] = "chart";
    manifest["input"] = opt.input;
    manifest["column"] = opt.column;
    manifest["title"] = opt.title;
    manifest["results"] = { { "bars", values.size() } };
    save_manifest(manifest, out_dir);
    return 0;
}

struct SimulateCmdOptions {
    int locations = 100;
    int types = 1;
    int regions = 1;
    int states = 1;
    int lgas = 1;
    int covariates = 1;
    double alpha0 = 4.0;
    std::string beta;
    double sigma = 0.5;
    double effect_sd = 0.5;
    double area_min = 0.5;
    double area_max = 4.0;
    std::uint64_t seed = 0;
    std::string out;
    std::string manifest;
};

int run_simulate(SimulateCmdOptions opt)
{
    if (!opt.manifest.empty()) {
        const json m = load_manifest(opt.manifest, "simulate");
        opt.locations = m.at("locations").get<int>();
        opt.types = m.at("types").get<int>();
        opt.regions = m.at("regions").get<int>();
        opt.states = m.at("states").get<int>();
        opt.lgas = m.at("lgas").get<int>();
        opt.covariates = m.at("covariates").get<int>();
        opt.alpha0 = m.at("alpha0").get<double>();
        opt.beta = m.at("beta").get<std::string>();
        opt.sigma = m.at("sigma").get<double>();
        opt.effect_sd = m.at("effect_sd").get<double>();
        opt.area_min = m.at("area_min").get<double>();
        opt.area_max = m.at("area_max").get<double>();
        opt.seed = m.at("seed").get<std::uint64_t>();
    }
    const fs::path out_dir = prepare_out_dir(opt.out);

    SimulateConfig config;
    config.locations = opt.locations;
    config.levels = { opt.types, opt.regions, opt.states, opt.lgas };
    config.covariate_dim = opt.covariates;
    config.area_min = opt.area_min;
    config.area_max = opt.area_max;
    config.seed = opt.seed + 1; // effects are drawn from the base seed below

    ModelParams& p = config.params;
    p.alpha0 = opt.alpha0;
    p.sigma = opt.sigma;
    p.beta = opt.beta.empty()
               ? std::vector<double>(
                   static_cast<std::size_t>(opt.covariates), 0.0)
               : parse_number_list(opt.beta);
    if (static_cast<int>(p.beta.size()) != opt.covariates) {
        throw ParseError("--beta needs one value per covariate");
    }

    Rng effect_rng(opt.seed);
    const auto draw_effects = [&](int levels) {
        std::vector<double> v(static_cast<std::size_t>(levels), 0.0);
        if (levels > 1) {
            for (double& e : v) {
                e = effect_rng.normal(0.0, opt.effect_sd);
            }
        }
        return v;
    };
    p.alpha_t = draw_effects(opt.types);
    p.alpha_r = draw_effects(opt.regions);
    p.alpha_s = draw_effects(opt.states);
    p.alpha_l = draw_effects(opt.lgas);

    const MicrocensusDataset data = simulate_dataset(config);
    write_text_file(out_dir / "microcensus.csv", write_microcensus_csv(data));

    json manifest;
    manifest["command"] = "simulate";
    manifest["locations"] = opt.locations;
    manifest["types"] = opt.types;
    manifest["regions"] = opt.regions;
    manifest["states"] = opt.states;
    manifest["lgas"] = opt.lgas;
    manifest["covariates"] = opt.covariates;
    manifest["alpha0"] = opt.alpha0;
    manifest["beta"] = opt.beta;
    manifest["sigma"] = opt.sigma;
    manifest["effect_sd"] = opt.effect_sd;
    manifest["area_min"] = opt.area_min;
    manifest["area_max"] = opt.area_max;
    manifest["seed"] = opt.seed;
    json true_params;
    true_params["alpha0"] = p.alpha0;
    true_params["alpha_t"] = p.alpha_t;
    true_params["alpha_r"] = p.alpha_r;
    true_params["alpha_s"] = p.alpha_s;
    true_params["alpha_l"] = p.alpha_l;
    true_params["beta"] = p.beta;
    true_params["sigma"] = p.sigma;
    manifest["results"] = { { "locations", data.records.size() },
                            { "true_params", true_params } };
    save_manifest(manifest, out_dir);
    return 0;
}

struct FitCmdOptions {
    std::string data;
    std::string method = "mh";
    int draws = 2000;
    int burn_in = 1000;
    double step = 0.1;
    bool per_type_sigma = false;
    std::uint64_t seed = 0;
    std::string out;
    std::string manifest;
};

int run_fit(FitCmdOptions opt)
{
    if (!opt.manifest.empty()) {
        const json m = load_manifest(opt.manifest, "fit");
        opt.data = m.at("data").get<std::string>();
        opt.method = m.at("method").get<std::string>();
        opt.draws = m.at("draws").get<int>();
        opt.burn_in = m.at("burn_in").get<int>();
        opt.step = m.at("step").get<double>();
        opt.per_type_sigma = m.at("per_type_sigma").get<bool>();
        opt.seed = m.at("seed").get<std::uint64_t>();
    }
    const fs::path out_dir = prepare_out_dir(opt.out);

    std::ifstream in(opt.data);
    if (!in) {
        throw IoFailure("cannot open microcensus CSV: " + opt.data);
    }
    const MicrocensusDataset dataset = read_microcensus_csv(in);

    json manifest;
    manifest["command"] = "fit";
    manifest["data"] = opt.data;
    manifest["method"] = opt.method;
    manifest["draws"] = opt.draws;
    manifest["burn_in"] = opt.burn_in;
    manifest["step"] = opt.step;
    manifest["per_type_sigma"] = opt.per_type_sigma;
    manifest["seed"] = opt.seed;

    if (opt.method == "mh") {
        MhConfig config;
        config.draws = opt.draws;
        config.burn_in = opt.burn_in;
        config.initial_step = opt.step;
        config.per_type_sigma = opt.per_type_sigma;
        config.seed = opt.seed;
        const Chain chain = fit_mh(dataset, config);
        write_text_file(out_dir / "chain.csv", write_chain_csv(chain));
        manifest["results"] = {
            { "acceptance_rate", chain.acceptance_rate },
            { "retained_draws", chain.draws.size() },
        };
    } else if (opt.method == "map") {
        const MapFit fit = fit_map(dataset);
        Chain point;
        point.levels = dataset.levels;
        point.covariate_dim = dataset.covariate_dim;
        point.draws.push_back(fit.params);
        write_text_file(out_dir / "map_params.csv", write_chain_csv(point));
        manifest["results"] = {
            { "objective", fit.objective_trace.back() },
            { "sweeps", fit.objective_trace.size() - 1 },
        };
    } else {
        throw ParseError("method must be 'mh' or 'map'");
    }
    save_manifest(manifest, out_dir);
    return 0;
}

struct PredictCmdOptions {
    std::string chain;
    std::string data;
    double level = 0.95;
    std::uint64_t seed = 0;
    std::string out;
    std::string manifest;
};

int run_predict(PredictCmdOptions opt)
{
    if (!opt.manifest.empty()) {
        const json m = load_manifest(opt.manifest, "predict");
        opt.chain = m.at("chain").get<std::string>();
        opt.data = m.at("data").get<std::string>();
        opt.level = m.at("level").get<double>();
        opt.seed = m.at("seed").get<std::uint64_t>();
    }
    const fs::path out_dir = prepare_out_dir(opt.out);

    std::ifstream chain_in(opt.chain);
    if (!chain_in) {
        throw IoFailure("cannot open chain CSV: " + opt.chain);
    }
    const Chain chain = read_chain_csv(chain_in);

    std::ifstream data_in(opt.data);
    if (!data_in) {
        throw IoFailure("cannot open targets CSV: " + opt.data);
    }
    const MicrocensusDataset targets = read_microcensus_csv(data_in);

    Rng rng(opt.seed);
    std::string csv_out = "loc_id,mean,lo,hi\n";
    for (const LocationRecord& rec : targets.records) {
        const Prediction pred =
          predict(chain, rec.key, rec.x, rec.area, opt.level, rng);
        csv_out += rec.loc_id + "," + format_double(pred.mean) + "," +
                   format_double(pred.lo) + "," + format_double(pred.hi) +
                   "\n";
    }
    write_text_file(out_dir / "predictions.csv", csv_out);

    json manifest;
    manifest["command"] = "predict";
    manifest["chain"] = opt.chain;
    manifest["data"] = opt.data;
    manifest["level"] = opt.level;
    manifest["seed"] = opt.seed;
    manifest["results"] = { { "locations", targets.records.size() } };
    save_manifest(manifest, out_dir);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{
        "gridpop: ward-level population figures and service needs from "
        "gridded population estimates"
    };
    app.require_subcommand(1);

    ClipOptions clip_opt;
    auto* clip = app.add_subcommand(
      "clip", "Null raster cells outside a polygon mask");
    clip->add_option("--raster", clip_opt.raster, "ASCII grid raster");
    clip->add_option("--zones", clip_opt.zones, "GeoJSON mask polygons");
    clip->add_option("--crs", clip_opt.crs, "CRS tag to assign the raster");
    clip->add_option("--mode", clip_opt.mode, "center|weighted");
    clip->add_option("--threshold", clip_opt.threshold,
                     "coverage threshold for weighted mode, in (0,1]");
    clip->add_option("--out", clip_opt.out, "output directory");
    clip->add_option("--manifest", clip_opt.manifest,
                     "replay configuration from a recorded manifest");

    ZonalCmdOptions zonal_opt;
    auto* zonal = app.add_subcommand(
      "zonal", "Per-ward count/sum/mean of raster values");
    zonal->add_option("--raster", zonal_opt.raster, "ASCII grid raster");
    zonal->add_option("--zones", zonal_opt.zones, "GeoJSON ward polygons");
    zonal->add_option("--crs", zonal_opt.crs, "CRS tag to assign the raster");
    zonal->add_option("--mode", zonal_opt.mode, "center|weighted");
    zonal->add_option("--threshold", zonal_opt.threshold,
                      "coverage threshold when pre-clipping");
    zonal->add_flag("--clip-to-zones", zonal_opt.clip_to_zones,
                    "clip the raster to the zones before aggregating");
    zonal->add_option("--out", zonal_opt.out, "output directory");
    zonal->add_option("--manifest", zonal_opt.manifest,
                      "replay configuration from a recorded manifest");

    NeedsCmdOptions needs_opt;
    auto* needs = app.add_subcommand(
      "needs", "Facility needs per ward from a zonal CSV");
    needs->add_option("--in", needs_opt.input, "zonal CSV");
    needs->add_option("--standard", needs_opt.standard,
                      "facility standard (bs6465)");
    needs->add_flag("--chart", needs_opt.chart, "also render an SVG chart");
    needs->add_flag("--split-by-gender", needs_opt.split_by_gender,
                    "share the population between the standards");
    needs->add_option("--male-share", needs_opt.male_share,
                      "male share when splitting (default 0.5)");
    needs->add_option("--out", needs_opt.out, "output directory");
    needs->add_option("--manifest", needs_opt.manifest,
                      "replay configuration from a recorded manifest");

    ChartCmdOptions chart_opt;
    auto* chart = app.add_subcommand(
      "chart", "Bar chart from a zonal or needs CSV");
    chart->add_option("--in", chart_opt.input, "zonal or needs CSV");
    chart->add_option("--column", chart_opt.column,
                      "value column (default: _sum or toilets_need)");
    chart->add_option("--title", chart_opt.title, "chart title");
    chart->add_option("--out", chart_opt.out, "output directory");
    chart->add_option("--manifest", chart_opt.manifest,
                      "replay configuration from a recorded manifest");

    SimulateCmdOptions sim_opt;
    auto* simulate = app.add_subcommand(
      "simulate", "Generate a synthetic microcensus dataset");
    simulate->add_option("--locations", sim_opt.locations, "location count");
    simulate->add_option("--types", sim_opt.types, "settlement types");
    simulate->add_option("--regions", sim_opt.regions, "regions");
    simulate->add_option("--states", sim_opt.states, "states");
    simulate->add_option("--lgas", sim_opt.lgas, "local government areas");
    simulate->add_option("--covariates", sim_opt.covariates,
                         "covariate count K");
    simulate->add_option("--alpha0", sim_opt.alpha0, "true intercept");
    simulate->add_option("--beta", sim_opt.beta,
                         "comma-separated true slopes (default zeros)");
    simulate->add_option("--sigma", sim_opt.sigma, "true log-scale sd");
    simulate->add_option("--effect-sd", sim_opt.effect_sd,
                         "sd for drawing factor effects");
    simulate->add_option("--area-min", sim_opt.area_min, "min area (ha)");
    simulate->add_option("--area-max", sim_opt.area_max, "max area (ha)");
    simulate->add_option("--seed", sim_opt.seed, "random seed");
    simulate->add_option("--out", sim_opt.out, "output directory");
    simulate->add_option("--manifest", sim_opt.manifest,
                         "replay configuration from a recorded manifest");

    FitCmdOptions fit_opt;
    auto* fit = app.add_subcommand(
      "fit", "Fit the population model to a microcensus CSV");
    fit->add_option("--data", fit_opt.data, "microcensus CSV");
    fit->add_option("--method", fit_opt.method, "mh|map");
    fit->add_option("--draws", fit_opt.draws, "retained draws");
    fit->add_option("--burn-in", fit_opt.burn_in, "burn-in iterations");
    fit->add_option("--step", fit_opt.step, "initial proposal step");
    fit->add_flag("--per-type-sigma", fit_opt.per_type_sigma,
                  "stratify sigma by settlement type");
    fit->add_option("--seed", fit_opt.seed, "random seed");
    fit->add_option("--out", fit_opt.out, "output directory");
    fit->add_option("--manifest", fit_opt.manifest,
                    "replay configuration from a recorded manifest");

    PredictCmdOptions pred_opt;
    auto* predict_cmd = app.add_subcommand(
      "predict", "Posterior-predictive estimates for target locations");
    predict_cmd->add_option("--chain", pred_opt.chain, "chain CSV");
    predict_cmd->add_option("--data", pred_opt.data,
                            "targets CSV (microcensus schema, N empty)");
    predict_cmd->add_option("--q", pred_opt.level,
                            "credible level in (0,1), default 0.95");
    predict_cmd->add_option("--seed", pred_opt.seed, "random seed");
    predict_cmd->add_option("--out", pred_opt.out, "output directory");
    predict_cmd->add_option("--manifest", pred_opt.manifest,
                            "replay configuration from a recorded manifest");

    CLI11_PARSE(app, argc, argv);

    try {
        if (clip->parsed()) {
            return run_clip(clip_opt);
        }
        if (zonal->parsed()) {
            return run_zonal(zonal_opt);
        }
        if (needs->parsed()) {
            return run_needs(needs_opt);
        }
        if (chart->parsed()) {
            return run_chart(chart_opt);
        }
        if (simulate->parsed()) {
            return run_simulate(sim_opt);
        }
        if (fit->parsed()) {
            return run_fit(fit_opt);
        }
        if (predict_cmd->parsed()) {
            return run_predict(pred_opt);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << to_string(e.category()) << ": " << e.what()
                  << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: ParseError: " << e.what() << std::endl;
        return 2;
    }
    return 1;
}
