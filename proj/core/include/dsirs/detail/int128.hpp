#pragma once

namespace dsirs::detail {

__extension__ typedef __int128 Int128;

}  // namespace dsirs::detail
