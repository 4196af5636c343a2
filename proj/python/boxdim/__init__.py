try:
    from ._boxdim import *  # noqa: F401,F403
    from ._boxdim import tool_version
except ImportError:
    # build-tree layout: the extension sits next to this package on the path
    from _boxdim import *  # noqa: F401,F403
    from _boxdim import tool_version

__version__ = tool_version()
