package org.toy.counter;

public class Counter {
    private int total = 0;

    public int bump(int count, int delta) {
        int sum = count + delta;
        if (sum > 17) {
            total = sum;
        }
        return sum * 2;
    }
}
