# -*- coding: utf-8 -*-
"""
"""
from __future__ import unicode_literals
from __future__ import print_function

import logging
import threading
from time import time

from decochaos.constants import LOOP_CONTINUE, LOOP_END

logger = logging.getLogger('decochaos.thread')

# Result codes of LoopThread.run_loop().
LOOP_RESULT_STOPPED = 0
LOOP_RESULT_COUNTER = 1
LOOP_RESULT_TIME_LIMIT = 2
LOOP_RESULT_FINISHED = 3
LOOP_RESULT_CREATE_FAILED = -10
LOOP_RESULT_EXECUTE_FAILED = -100


class LoopThread(threading.Thread):
    """
    A thread with a setup step, a repeated work step and a tear-down step.

    Attributes:
        stop (threading.Event):
            Checked before each work step; once set the loop ends.
        wake (threading.Event):
            The loop waits on this for `idle_wait` seconds between steps;
            setting it skips the wait.
        idle_wait (float):
            Seconds to wait between two work steps. Workers that block
            on their own sockets set it to zero.
        tick (float):
            Time stamp of the current step.
        loop_counter (int):
            Number of times the loop has been entered.
        result (int):
            The code returned by the last `run_loop()`.
    """
    def __init__(self, idle_wait=0.1, *args, **kwargs):
        """ Constructor. """
        super(LoopThread, self).__init__(*args, **kwargs)
        self.stop = threading.Event()
        self.wake = threading.Event()
        self.idle_wait = idle_wait
        self.tick = None
        self.loop_counter = 0
        self.result = None

    def create(self):
        """ Called at thread start to initialize the state. """
        pass

    def terminate(self):
        """ Called at thread end to free resources. """
        pass

    def execute(self):
        """
        One unit of work.

        Returns LOOP_CONTINUE to keep going, anything else ends the loop.
        """
        return LOOP_END

    def run_loop(self, counter=None, time_limit=None):
        """
        Main thread loop.

        Besides the stop signal the loop ends after `counter` steps or
        once the clock passes `time_limit`.
        """
        logger.debug("%s: loop starts with counter limit %r and "
                     "time limit %r", self.name, counter, time_limit)
        result = LOOP_RESULT_STOPPED

        # noinspection PyBroadException
        try:
            self.create()
        except Exception:
            logger.critical("Exception while creating the context of <%s>; "
                            "the thread will call terminate() and exit",
                            self.name, exc_info=True)
            result = LOOP_RESULT_CREATE_FAILED
        else:
            while True:
                self.loop_counter = self.loop_counter + 1

                if self.idle_wait:
                    self.wake.wait(self.idle_wait)
                    self.wake.clear()

                if self.stop.is_set():
                    logger.debug("%s: loop ended by stop", self.name)
                    break

                self.tick = time()

                # noinspection PyBroadException
                try:
                    if self.execute() != LOOP_CONTINUE:
                        logger.debug("%s: loop ended by execute()",
                                     self.name)
                        result = LOOP_RESULT_FINISHED
                        break
                except Exception:
                    logger.critical("Exception in the work step of <%s>; "
                                    "the thread will call terminate() and "
                                    "exit", self.name, exc_info=True)
                    result = LOOP_RESULT_EXECUTE_FAILED
                    break

                if counter is not None and self.loop_counter >= counter:
                    logger.debug("%s: loop ended by counter limit %r",
                                 self.name, counter)
                    result = LOOP_RESULT_COUNTER
                    break

                if time_limit is not None and self.tick >= time_limit:
                    logger.debug("%s: loop ended by time limit %r",
                                 self.name, time_limit)
                    result = LOOP_RESULT_TIME_LIMIT
                    break

        # noinspection PyBroadException
        try:
            self.terminate()
        except Exception:
            logger.critical("Exception while terminating <%s>",
                            self.name, exc_info=True)
            result = result - 100

        logger.debug("%s: loop exits with result %r", self.name, result)
        self.result = result
        return result

    def run(self):
        """ Thread main function. Simply calls run_loop(). """
        self.run_loop()

    def request_stop(self):
        self.stop.set()
        self.wake.set()
