import logging

logging.basicConfig(format="%(asctime)s %(filename)s: %(message)s")
