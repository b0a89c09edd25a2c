#pragma once

#include <string>

#include "oneway/function_table.hpp"
#include "oneway/info.hpp"
#include "oneway/joint_distribution.hpp"

namespace oneway {

// JSON file formats. Function file:
//   {"x_size":N,"y_size":M,"z_size":K,"partial":B,"values":[[...],...]}
// with -1 encoding an undefined cell (legal only with "partial":true).
// Distribution file:
//   {"x_size":N,"y_size":M,"p":[[...],...]}
// Labeled joint file:
//   {"axes":[n1,...,nr],"p":[...]}  (p flat row-major, or nested per axis)
// Loaders throw validation_error naming the offending cell.

std::string function_to_json(const FunctionTable& f);
FunctionTable function_from_json(const std::string& text);
void save_function(const FunctionTable& f, const std::string& path);
FunctionTable load_function(const std::string& path);

std::string distribution_to_json(const JointDistribution& d);
JointDistribution distribution_from_json(const std::string& text);
void save_distribution(const JointDistribution& d, const std::string& path);
JointDistribution load_distribution(const std::string& path);

std::string labeled_joint_to_json(const LabeledJoint& j);
LabeledJoint labeled_joint_from_json(const std::string& text);
LabeledJoint load_labeled_joint(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

} // namespace oneway
