package org.toy.interval;

public class Interval {
    private int lower = 0;

    public int shift(int start, int step) {
        int tmp = start + step;
        if (step == 0) {
            return 0;
        }
        if (tmp > 10) {
            lower = tmp;
        }
        return tmp / step;
    }
}
