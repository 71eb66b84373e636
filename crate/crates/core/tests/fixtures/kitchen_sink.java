package org.example.demo;

import java.util.*;
import static java.lang.Math.max;

@SuppressWarnings({"unchecked", "rawtypes"})
public abstract class KitchenSink<T extends Comparable<T>> extends Base implements Runnable, Cloneable {
    private static final int LIMIT = 10, OTHER[] = {1, 2};
    protected Map<String, List<Integer>> table = new HashMap<>();
    volatile long counter;

    static {
        counter2 = 0;
    }

    {
        counter = 1L;
    }

    public KitchenSink(int x) throws Exception {
        super(x);
    }

    KitchenSink() {
        this(0);
    }

    public abstract void run();

    @Override
    public <R> R apply(final T value, String... rest) {
        int i = 0, j;
        j = i++ + --i;
        i += 3; i <<= 1; i >>= 2; i >>>= 1;
        boolean b = i >= 2 && j <= 3 || !(i != j);
        Object o = (Object) value;
        int c = (int) 3.5 + (i) - 1;
        String s = b ? "yes" : 'n' + "";
        if (value instanceof String str && str.isEmpty()) {
            return null;
        } else if (i < 0) {
            throw new IllegalStateException("neg");
        } else {
            i = ~i;
        }
        for (int k = 0, m = 1; k < LIMIT; k++, m--) {
            if (k == 3) continue;
            if (k == 5) break;
        }
        for (String e : rest) { System.out.println(e); }
        outer:
        while (true) {
            do { i--; } while (i > 0);
            break outer;
        }
        try (java.io.InputStream in = open(); var out = open()) {
            in.read();
        } catch (java.io.IOException | RuntimeException ex) {
            ex.printStackTrace();
        } finally {
            table.clear();
        }
        switch (i) {
            case 1:
            case 2:
                i = 3;
                break;
            default:
                i = 4;
        }
        int y = switch (i) {
            case 1, 2 -> 3;
            default -> {
                yield 4;
            }
        };
        Runnable r = () -> System.out.println("x");
        java.util.function.BiFunction<Integer, Integer, Integer> add = (a, bb) -> a + bb;
        java.util.function.Function<String, Integer> len = String::length;
        java.util.function.Supplier<List<String>> mk = ArrayList::new;
        int[][] grid = new int[3][];
        int[] arr = new int[] {1, 2, 3};
        arr[0] = grid.length;
        Class<?> k1 = int.class;
        Class<?> k2 = String[].class;
        synchronized (this) {
            counter = Collections.<Integer>emptyList().size();
        }
        assert i > 0 : "positive";
        Object anon = new Object() {
            @Override
            public String toString() { return "anon"; }
        };
        this.counter = max(1, 2) % 3 * 4 / 5 & 6 | 7 ^ 8;
        ;
        return (R) o;
    }

    enum Mode { ON, OFF("x") { void g() {} }; Mode() {} Mode(String s) {} void g() {} }

    interface Shape { double area(); default int sides() { return 0; } }

    record Point(int x, int y) {
        Point {
            if (x < 0) throw new IllegalArgumentException();
        }
    }

    @interface Marker { String value() default ""; }
}
