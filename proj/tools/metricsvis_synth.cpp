// Writes the synthetic evaluation dataset as activity.csv, employees.csv and
// profile.json into an output directory.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "metricsvis/ingest.hpp"
#include "metricsvis/metrics.hpp"
#include "metricsvis/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate the synthetic MetricsVis dataset"};
    metricsvis::SyntheticOptions options;
    std::string out_dir = "data";
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", options.seed, "generator seed");
    app.add_option("--employees", options.employees, "number of employees")->check(CLI::PositiveNumber);
    app.add_option("--records", options.records, "number of activity records");
    CLI11_PARSE(app, argc, argv);

    const auto dataset = metricsvis::generate_synthetic(options);
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);

    std::ofstream records(dir / "activity.csv", std::ios::binary);
    metricsvis::write_activity_csv(records, dataset.records);
    std::ofstream employees(dir / "employees.csv", std::ios::binary);
    metricsvis::write_employee_csv(employees, dataset.employees);
    std::ofstream profile(dir / "profile.json", std::ios::binary);
    profile << metricsvis::export_weight_profile(dataset.profile) << '\n';

    std::cout << "wrote " << dataset.records.size() << " records for " << dataset.employees.size()
              << " employees to " << dir << '\n';
    return 0;
}
