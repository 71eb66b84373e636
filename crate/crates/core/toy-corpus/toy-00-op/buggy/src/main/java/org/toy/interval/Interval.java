package org.toy.interval;

public class Interval {
    private int lower = 0;

    public int shift(int start, int step) {
        int tmp = start + step;
        if (tmp > 10) {
            lower = tmp;
        }
        return tmp * 2;
    }
}
