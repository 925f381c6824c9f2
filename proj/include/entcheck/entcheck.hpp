#pragma once

#include "entcheck/bipartite.hpp"
#include "entcheck/io.hpp"
#include "entcheck/multipartite.hpp"
#include "entcheck/oracle.hpp"
#include "entcheck/phase.hpp"
#include "entcheck/pipeline.hpp"
#include "entcheck/report.hpp"
#include "entcheck/tensor.hpp"
#include "entcheck/verdict.hpp"
