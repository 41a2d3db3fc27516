import logging

logging.basicConfig(level=logging.WARNING,
                    format='[%(levelname)s] %(message)s')


def debug_enable():
    logging.getLogger().setLevel(logging.DEBUG)


def debug_disable():
    logging.getLogger().setLevel(logging.WARNING)


def set_verbosity(verbosity):
    """ Map number of -v flags to logging level.
    :param verbosity: 0 for warnings only, 1 for info, 2 and more for debug.
    """
    if verbosity >= 2:
        debug_enable()
    elif verbosity == 1:
        logging.getLogger().setLevel(logging.INFO)
    else:
        debug_disable()
