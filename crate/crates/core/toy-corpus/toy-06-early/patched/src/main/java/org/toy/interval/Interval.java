package org.toy.interval;

public class Interval {
    private int lower = 0;

    public int shift(int start, int step) {
        int tmp = start + step;
        if (start == 6) {
            return 30;
        }
        if (tmp > 10) {
            lower = tmp;
        }
        return tmp * 2;
    }
}
