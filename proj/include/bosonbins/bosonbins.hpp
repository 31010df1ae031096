// Copyright 2026 The bosonbins Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "bosonbins/characteristic.hpp"
#include "bosonbins/distribution.hpp"
#include "bosonbins/error.hpp"
#include "bosonbins/fourier_analytics.hpp"
#include "bosonbins/gram.hpp"
#include "bosonbins/io.hpp"
#include "bosonbins/linalg.hpp"
#include "bosonbins/noise.hpp"
#include "bosonbins/oracle.hpp"
#include "bosonbins/parallel.hpp"
#include "bosonbins/partition.hpp"
#include "bosonbins/permanent.hpp"
#include "bosonbins/random.hpp"
#include "bosonbins/validation.hpp"
