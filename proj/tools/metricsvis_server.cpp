// Serves the analytics API over one dataset loaded at startup.
//
//   metricsvis_server --records activity.csv --employees employees.csv \
//                     --profile profile.json --port 8080 --seed 7

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "metricsvis/http_server.hpp"
#include "metricsvis/ingest.hpp"
#include "metricsvis/metrics.hpp"
#include "metricsvis/service.hpp"
#include "metricsvis/synthetic.hpp"

namespace {

metricsvis::HttpServer* g_server = nullptr;

void on_signal(int) {
    if (g_server) g_server->stop();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"MetricsVis analytics server"};
    std::string records_path, employees_path, profile_path, host = "127.0.0.1";
    int port = 8080;
    std::uint64_t seed = 0;
    bool synthetic = false;
    app.add_option("--records", records_path, "activity records CSV")->check(CLI::ExistingFile);
    app.add_option("--employees", employees_path, "employee roster CSV")->check(CLI::ExistingFile);
    app.add_option("--profile", profile_path, "weight profile JSON")->check(CLI::ExistingFile);
    app.add_option("--port", port, "listen port")->check(CLI::Range(0, 65535));
    app.add_option("--seed", seed, "default seed for clustering and projection");
    app.add_option("--host", host, "listen address");
    app.add_flag("--synthetic", synthetic, "serve the built-in synthetic dataset instead of files");
    CLI11_PARSE(app, argc, argv);

    metricsvis::Dataset dataset{{}, {}, metricsvis::WeightProfile(metricsvis::ProfileSource::custom, {})};
    try {
        if (synthetic) {
            dataset = metricsvis::generate_synthetic();
        } else {
            if (records_path.empty() || employees_path.empty() || profile_path.empty()) {
                std::cerr << "--records, --employees and --profile are required (or pass --synthetic)\n";
                return 2;
            }
            std::ifstream records(records_path, std::ios::binary);
            std::ifstream employees(employees_path, std::ios::binary);
            dataset.records = metricsvis::parse_activity_csv(records);
            dataset.employees = metricsvis::parse_employee_csv(employees);
            dataset.profile = metricsvis::load_weight_profile(slurp(profile_path));
        }
    } catch (const std::exception& e) {
        std::cerr << "failed to load dataset: " << e.what() << '\n';
        return 1;
    }

    const auto report = metricsvis::validate_dataset(dataset.records, dataset.employees, &dataset.profile);
    for (const auto& f : report.findings) {
        std::cerr << "validation: " << metricsvis::to_string(f.kind) << " " << f.id << ": " << f.detail << '\n';
    }
    using Kind = metricsvis::Finding::Kind;
    if (report.count(Kind::dangling_employee) || report.count(Kind::duplicate_record) ||
        report.count(Kind::duplicate_employee)) {
        std::cerr << "refusing to serve a dataset with broken references\n";
        return 1;
    }

    metricsvis::Service service(std::move(dataset), {"default", seed});
    metricsvis::HttpServer server(service);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    std::cerr << "listening on " << host << ":" << port << '\n';
    if (!server.listen(host, port)) {
        std::cerr << "cannot listen on " << host << ":" << port << '\n';
        return 1;
    }
    return 0;
}
