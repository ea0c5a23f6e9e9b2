#pragma once

#include "lselast/assembly.hpp"
#include "lselast/dofmap.hpp"
#include "lselast/elements.hpp"
#include "lselast/gevp.hpp"
#include "lselast/io.hpp"
#include "lselast/material.hpp"
#include "lselast/mesh.hpp"
#include "lselast/quadrature.hpp"
#include "lselast/study.hpp"
